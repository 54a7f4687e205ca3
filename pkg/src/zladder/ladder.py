"""Asymptotic surrogate of the ladder map: phi(t)/2 = t - (1 - c) pi(t).

pi(t) is exact (sieve) up to ``sieve_bound`` and Riemann's R(t) above it.
The surrogate reverse image T_ring of T solves phi_half(T_ring) = T.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .sets import DisjointSet

EULER_GAMMA = 0.57721566490153286
ONE_MINUS_C = 1.0 - EULER_GAMMA
DEFAULT_SIEVE_BOUND = 10**8
_EI_SWITCH = 50.0


def sieve_bound() -> int:
    return int(float(os.environ.get("ZL_SIEVE_BOUND", DEFAULT_SIEVE_BOUND)))


def primes_up_to(n: int, segment: int = 1 << 22) -> np.ndarray:
    """All primes <= n, by an odd-only segmented sieve of Eratosthenes."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    root = math.isqrt(n)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if small[p]:
            small[p * p::p] = False
    base = np.flatnonzero(small)[1:]  # odd base primes
    chunks = [np.array([2], dtype=np.int64)]
    # segment [lo, lo + 2*segment) of odd numbers lo, lo+2, ...
    lo = 3
    while lo <= n:
        count = min(segment, (n - lo) // 2 + 1)
        mark = np.ones(count, dtype=bool)
        hi = lo + 2 * (count - 1)
        for p in base:
            p = int(p)
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            mark[(start - lo) // 2::p] = False
        chunks.append(lo + 2 * np.flatnonzero(mark).astype(np.int64))
        lo = hi + 2
    return np.concatenate(chunks)


class PrimeTable:
    """Lazily built sorted prime list with a one-time, thread-safe initialization."""

    def __init__(self, bound: int | None = None):
        self._bound = bound
        self._primes = None
        self._lock = threading.Lock()

    @property
    def bound(self) -> int:
        return self._bound if self._bound is not None else sieve_bound()

    @property
    def primes(self) -> np.ndarray:
        if self._primes is None:
            with self._lock:
                if self._primes is None:
                    self._primes = primes_up_to(self.bound)
        return self._primes

    def count(self, t) -> np.ndarray:
        return np.searchsorted(self.primes, np.floor(t), side="right")


_TABLE = PrimeTable()


def expint_ei(x: float) -> float:
    """Exponential integral Ei(x) for x > 0: power series below 50, asymptotic series above."""
    if not x > 0:
        raise DomainError("expint_ei requires x > 0")
    if x <= _EI_SWITCH:
        total, term, k = 0.0, 1.0, 0
        while True:
            k += 1
            term *= x / k
            inc = term / k
            total += inc
            if inc < 1e-17 * total:
                break
        return EULER_GAMMA + math.log(x) + total
    total, term, k = 1.0, 1.0, 0
    while True:
        k += 1
        nxt = term * k / x
        if nxt > term or nxt < 1e-17:
            break
        term = nxt
        total += term
    return math.exp(x) / x * total


def li(t: float) -> float:
    if not t > 1:
        raise DomainError("li requires t > 1")
    return expint_ei(math.log(t))


def _zeta_int(s: int) -> float:
    """zeta(s) for integer s >= 2 (direct sum + Euler-Maclaurin tail)."""
    n = 50
    head = math.fsum(k ** -s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** -s + s * n ** (-s - 1) / 12 \
        - s * (s + 1) * (s + 2) * n ** (-s - 3) / 720
    return head + tail


def riemann_r(t: float) -> float:
    """Riemann's R(t) = 1 + sum_k (ln t)^k / (k k! zeta(k+1)) (Gram series)."""
    if not t > 1:
        raise DomainError("riemann_r requires t > 1")
    x = math.log(t)
    total, power, k = 1.0, 1.0, 0
    while True:
        k += 1
        power *= x / k
        term = power / (k * _zeta_int(k + 1))
        total += term
        if k > x and term < 1e-17 * total:
            return total


def prime_pi(t, table: PrimeTable | None = None):
    """pi(t): exact below the sieve bound, Riemann R approximation above."""
    table = table or _TABLE
    arr = np.asarray(t, dtype=np.float64)
    if np.any(~(arr >= 2)):
        raise DomainError("prime_pi requires t >= 2")
    out = np.empty(arr.shape)
    small = arr <= table.bound
    if np.any(small):
        out[small] = table.count(arr[small])
    big = ~small
    if np.any(big):
        out[big] = [riemann_r(float(v)) for v in arr[big]]
    return out[()] if arr.ndim == 0 else out


def phi_half(t, table: PrimeTable | None = None):
    """Surrogate phi(t)/2 = t - (1 - c) pi(t)."""
    arr = np.asarray(t, dtype=np.float64)
    return arr - ONE_MINUS_C * prime_pi(arr, table)


def ladder_image(T, table: PrimeTable | None = None, max_iter: int = 200):
    """T_ring with phi_half(T_ring) = T (the largest such point, so the map is increasing).

    Iterates x <- T + (1 - c) pi(x) downward from an upper bound; the map is
    nondecreasing, so the sequence decreases monotonically to the largest
    fixed point.  In the sieve range it stops exactly after finitely many steps.
    """
    T_arr = np.asarray(T, dtype=np.float64)
    if np.any(~(T_arr >= 2)):
        raise DomainError("ladder_image requires T >= 2")
    x = T_arr + ONE_MINUS_C * prime_pi(2 * T_arr, table)
    for _ in range(max_iter):
        nxt = T_arr + ONE_MINUS_C * prime_pi(x, table)
        step = np.abs(x - nxt)
        x = np.minimum(x, nxt)
        if np.all(step <= 1e-13 * x):
            break
    resid = np.abs(phi_half(x, table) - T_arr)
    if np.any(resid > 1e-6 * T_arr):
        raise ConvergenceError(f"ladder_image did not converge: max residual {resid.max()}")
    return x[()] if T_arr.ndim == 0 else x


def map_set(s: DisjointSet, table: PrimeTable | None = None) -> DisjointSet:
    """Endpoint-wise surrogate image of s; order and disjointness are preserved."""
    if len(s) == 0:
        return s.with_intervals([], [], [], "ring")
    ends = ladder_image(np.concatenate([s.lo, s.hi]), table)
    return s.with_intervals(ends[:len(s)], ends[len(s):], s.index, "ring")


@dataclass
class LadderReport:
    T: float
    U: float
    eps: float
    T_ring: float
    TU_ring: float
    d: float
    d_predicted: float
    disjoint: bool
    gap_bound: float
    exceeds_gap_bound: bool
    regime_reached: bool
    notes: list[str] = field(default_factory=list)


def disjointness_report(T: float, U: float, eps: float = 0.01,
                        table: PrimeTable | None = None) -> LadderReport:
    """Compare [T, T+U] with its surrogate image [T_ring, (T+U)_ring].

    d = T_ring - (T + U) is signed: negative means the segments overlap.
    """
    if not (T > 0 and U > 0 and eps > 0):
        raise DomainError("T, U and eps must be positive")
    T_ring = float(ladder_image(T, table))
    TU_ring = float(ladder_image(T + U, table))
    shift = T_ring - T
    d = shift - U
    d_pred = ONE_MINUS_C * float(prime_pi(T_ring, table)) - U
    bound = (ONE_MINUS_C - 2 * eps) * T / math.log(T)
    disjoint = T_ring > T + U
    exceeds = d > bound
    notes = []
    if not disjoint:
        notes.append("segments overlap: U exceeds (1-c) pi(T_ring); asymptotic regime not reached")
    elif not exceeds:
        notes.append("disjoint, but the gap is below (1-c-2eps) T / ln T")
    return LadderReport(T, U, eps, T_ring, TU_ring, d, d_pred, bool(disjoint), bound,
                        bool(exceeds), bool(disjoint and exceeds), notes)
