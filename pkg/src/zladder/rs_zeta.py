"""Phase functions and Hardy's Z function via the Riemann-Siegel formula.

Z is evaluated as the main sum plus the asymptotic remainder series
C0..C4 in powers of (t/2pi)^(-1/2).  The coefficient functions are power
series in u = p - 1/2 (p the fractional part of sqrt(t/2pi)); their Taylor
coefficients are generated once, in 60-digit arithmetic, from the entire
function Psi(p) = cos(2pi(p^2 - p - 1/16)) / cos(2pi p).  Working in the
series avoids the removable singularities of Psi at p = 1/4 and p = 3/4.

All evaluation is float64.  The phase reduction theta(t) - t*log(n) loses
about |theta| * 2**-53 radians, which bounds the useful range to t <= 1e7.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numba
import numpy as np

from .errors import DomainError

#: Lowest t accepted by theta_rs / z.  The first zero ordinate (14.13...) must be reachable.
T_MIN = 10.0
#: Upper end of the range where float64 phase reduction keeps Z to ~1e-8.
T_CEILING = 1.0e7

PI_L = np.longdouble("3.14159265358979323846264338327950288")

_CHUNK = 8192
_SERIES_TERMS = 90
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class ZEval:
    value: float
    err_bound: float


@dataclass(frozen=True)
class ShiftTriple:
    """Shifts rho1, rho2, rho3 on the t-axis together with the scale P = sqrt(T/2pi)."""

    rho1: float
    rho2: float
    rho3: float
    P: float

    def __post_init__(self):
        if not self.P > 0:
            raise DomainError(f"P must be positive, got {self.P}")

    @classmethod
    def at(cls, T: float, rho1: float = 0.0, rho2: float = 0.0, rho3: float = 0.0) -> "ShiftTriple":
        return cls(float(rho1), float(rho2), float(rho3), math.sqrt(T / (2 * math.pi)))

    @property
    def rhos(self) -> tuple[float, float, float]:
        return (self.rho1, self.rho2, self.rho3)

    @property
    def total(self) -> float:
        return self.rho1 + self.rho2 + self.rho3

    @property
    def T(self) -> float:
        return 2 * math.pi * self.P * self.P


def _prep(t):
    arr = np.asarray(t)
    if arr.dtype.kind in "iub":
        arr = arr.astype(np.float64)
    pi = PI_L if arr.dtype == np.longdouble else math.pi
    return arr, pi


def _out(arr, t):
    return arr[()] if np.ndim(t) == 0 else arr


def theta1(t):
    """(t/2) log(t/2pi) - t/2 - pi/8.  Extended-precision input gives extended-precision output."""
    arr, pi = _prep(t)
    if np.any(~(arr > 0)):
        raise DomainError("theta1 requires t > 0")
    return _out(arr / 2 * np.log(arr / (2 * pi)) - arr / 2 - pi / 8, t)


def theta1_deriv(t):
    arr, pi = _prep(t)
    if np.any(~(arr > 0)):
        raise DomainError("theta1_deriv requires t > 0")
    return _out(np.log(arr / (2 * pi)) / 2, t)


def theta_correction(t):
    """theta(t) - theta1(t) through the t^-3 term."""
    arr, _ = _prep(t)
    return _out(1 / (48 * arr) + 7 / (5760 * arr**3), t)


def theta_rs(t):
    """Riemann-Siegel phase theta(t) = theta1(t) + 1/(48t) + 7/(5760t^3)."""
    arr, _ = _prep(t)
    if np.any(~(arr >= T_MIN)):
        raise DomainError(f"theta_rs requires t >= {T_MIN}")
    return _out(theta1(arr) + theta_correction(arr), t)


@lru_cache(maxsize=1)
def remainder_coefficients() -> np.ndarray:
    """Taylor coefficients (rows C0..C4) of the remainder functions in u = p - 1/2."""
    import mpmath

    M = _SERIES_TERMS
    with mpmath.workdps(60):
        pi = mpmath.pi

        def cos_series(scale, shift, power):
            c = [mpmath.mpf(0)] * M
            for k in range(0, (M - 1) // power + 1):
                c[k * power] = scale**k / mpmath.factorial(k) * mpmath.cos(shift + k * pi / 2)
            return c

        # Psi(1/2 + u) = -cos(2pi u^2 - 5pi/8) / cos(2pi u)
        num = [-x for x in cos_series(2 * pi, -5 * pi / 8, 2)]
        den = cos_series(2 * pi, 0, 1)
        psi = [mpmath.mpf(0)] * M
        for n in range(M):
            psi[n] = num[n] - sum(den[j] * psi[n - j] for j in range(1, n + 1))

        def d(k):
            c = psi
            for _ in range(k):
                c = [i * c[i] for i in range(1, len(c))] + [mpmath.mpf(0)]
            return c

        def comb(*terms):
            return [sum(w * c[i] for w, c in terms) for i in range(M)]

        rows = [
            psi,
            comb((-1 / (96 * pi**2), d(3))),
            comb((1 / (64 * pi**2), d(2)), (1 / (18432 * pi**4), d(6))),
            comb((-1 / (64 * pi**2), d(1)), (-1 / (3840 * pi**4), d(5)), (-1 / (5308416 * pi**6), d(9))),
            comb((1 / (128 * pi**2), psi), (19 / (24576 * pi**4), d(4)),
                 (11 / (5898240 * pi**6), d(8)), (1 / (2038431744 * pi**8), d(12))),
        ]
        table = np.array([[float(x) for x in row] for row in rows])
    # |u| <= 1/2; drop the tail that cannot affect a float64 sum
    keep = np.abs(table) * 0.5 ** np.arange(M) > 1e-22
    last = int(np.nonzero(keep.any(axis=0))[0].max()) + 1
    return np.ascontiguousarray(table[:, :last])


@numba.njit(nogil=True, fastmath=True, cache=True)
def _z_kernel(t, coef, log_n, rsqrt_n, val, err):
    two_pi = 2.0 * math.pi
    ncoef = coef.shape[1]
    for i in range(t.shape[0]):
        ti = t[i]
        tau = ti / two_pi
        a = math.sqrt(tau)
        N = int(a)
        u = a - N - 0.5
        th = 0.5 * ti * math.log(tau) - 0.5 * ti - math.pi / 8.0 + 1.0 / (48.0 * ti) + 7.0 / (5760.0 * ti**3)
        s = 0.0
        for n in range(N):
            s += rsqrt_n[n] * math.cos(th - ti * log_n[n])
        r = 0.0
        ainv = 1.0 / a
        scale = 1.0
        for k in range(coef.shape[0]):
            h = 0.0
            for j in range(ncoef - 1, -1, -1):
                h = h * u + coef[k, j]
            r += h * scale
            scale *= ainv
        sign = 1.0 if (N - 1) % 2 == 0 else -1.0
        val[i] = 2.0 * s + sign * r / math.sqrt(a)
        # next omitted term ~ tau^(-11/4), plus rounding in the phase reduction
        err[i] = 0.05 * tau**-2.75 + 8.0 * 2.220446049250313e-16 * (abs(th) + 1.0) * math.sqrt(N)


@lru_cache(maxsize=8)
def _tables(nmax: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, nmax + 1, dtype=np.float64)
    return np.log(n), 1.0 / np.sqrt(n)


def _eval(t: np.ndarray, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    coef = remainder_coefficients()
    top = float(t.max()) if t.size else T_MIN
    # power-of-two table sizes keep the cache small
    log_n, rsqrt_n = _tables(1 << max(4, int(math.sqrt(top / (2 * math.pi))).bit_length()))
    val = np.empty_like(t)
    err = np.empty_like(t)
    bounds = [(s, min(s + _CHUNK, t.size)) for s in range(0, t.size, _CHUNK)]

    def work(b):
        _z_kernel(t[b[0]:b[1]], coef, log_n, rsqrt_n, val[b[0]:b[1]], err[b[0]:b[1]])

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, bounds))
    else:
        for b in bounds:
            work(b)
    return val, err


def _check_t(arr: np.ndarray) -> None:
    if arr.size and not np.all(arr >= T_MIN):
        raise DomainError(f"Z requires t >= {T_MIN}; got min {np.min(arr)}")


def z_values(t, threads: int = 1) -> np.ndarray:
    """Vectorized Z(t) without error bounds; the integration workhorse.

    Work is cut into fixed-size chunks independent of ``threads``, so the
    result is bit-identical for any thread count.
    """
    arr = np.ascontiguousarray(np.asarray(t, dtype=np.float64).ravel())
    _check_t(arr)
    return _eval(arr, threads)[0].reshape(np.shape(t))


def z_with_bounds(t, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    arr = np.ascontiguousarray(np.asarray(t, dtype=np.float64).ravel())
    _check_t(arr)
    val, err = _eval(arr, threads)
    return val.reshape(np.shape(t)), err.reshape(np.shape(t))


def z(t: float) -> ZEval:
    val, err = z_with_bounds(np.array([float(t)]))
    return ZEval(float(val[0]), float(err[0]))


def z_triple_with_bounds(t, shifts: ShiftTriple, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Z(t+rho1) Z(t+rho2) Z(t+rho3) and a first-order propagated error bound.

    Each distinct shift is evaluated once and factors are multiplied in
    sorted-shift order, so the value is exactly invariant under permutation
    of the triple.
    """
    arr = np.asarray(t, dtype=np.float64)
    rhos = sorted(shifts.rhos)
    cache = {}
    for r in rhos:
        if r not in cache:
            cache[r] = z_with_bounds(arr + r if r != 0.0 else arr, threads)
    (v1, e1), (v2, e2), (v3, e3) = (cache[r] for r in rhos)
    value = v1 * v2 * v3
    err = e1 * np.abs(v2 * v3) + e2 * np.abs(v1 * v3) + e3 * np.abs(v1 * v2)
    return value, err


def z_triple_values(t, shifts: ShiftTriple, threads: int = 1) -> np.ndarray:
    return z_triple_with_bounds(t, shifts, threads)[0]


def z_breakpoints(lo: float, hi: float, shifts: ShiftTriple | None = None) -> np.ndarray:
    """Points in [lo, hi] where the main-sum length N of some factor changes.

    The truncated Riemann-Siegel formula jumps by roughly its error bound
    there, so quadrature panels should not straddle them.
    """
    rhos = shifts.rhos if shifts is not None else (0.0,)
    out = []
    for r in set(rhos):
        m0 = max(1, math.isqrt(int(max(lo + r, 0) / (2 * math.pi))))
        m1 = math.isqrt(int((hi + r) / (2 * math.pi))) + 1
        m = np.arange(m0, m1 + 1, dtype=np.float64)
        pts = 2 * math.pi * m * m - r
        out.append(pts[(pts >= lo) & (pts <= hi)])
    return np.unique(np.concatenate(out)) if out else np.empty(0)


def z_triple(t: float, shifts: ShiftTriple) -> float:
    return float(z_triple_values(np.array([float(t)]), shifts)[0])
