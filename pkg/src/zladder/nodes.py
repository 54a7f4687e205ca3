"""Nodes k_nu(tau): solutions of theta1(k) = (pi*nu + tau)/3.

Nodes are computed in extended precision (``np.longdouble``).  Near k = 1e7
a float64 k has a spacing of ~2e-9 and theta1' ~ 7, so a float64 node could
not carry a phase residual below 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .rs_zeta import PI_L, T_MIN, theta1, theta1_deriv

MAX_ITER = 64
RESIDUAL_TOL = 1e-9
_TWO_PI_E = 2 * math.pi * math.e
_EPS_L16 = 16 * np.finfo(np.longdouble).eps


@dataclass(frozen=True)
class NodeQuery:
    nu: int
    tau: float = 0.0

    def __post_init__(self):
        if int(self.nu) != self.nu or self.nu < 1:
            raise DomainError(f"nu must be a positive integer, got {self.nu}")
        if not abs(self.tau) <= math.pi:
            raise DomainError(f"tau must lie in [-pi, pi], got {self.tau}")

    @property
    def target(self) -> np.longdouble:
        return node_target(self.nu, self.tau)


def node_target(nu, tau=0.0):
    """(pi*nu + tau)/3 in extended precision."""
    return (PI_L * np.asarray(nu, dtype=np.longdouble) + np.asarray(tau, dtype=np.longdouble)) / 3


def _seed(target: np.ndarray) -> np.ndarray:
    # theta1(k) = A  <=>  y e^y = c,  y = log(k/2pi) - 1,  c = (2A + pi/4) / (2pi e)
    c = (2 * target.astype(np.float64) + math.pi / 4) / _TWO_PI_E
    y = np.log1p(c)
    for _ in range(30):
        ey = np.exp(y)
        y = y - (y * ey - c) / (ey * (1 + y))
    return 2 * math.pi * np.exp(1 + y)


def solve_theta1(target) -> np.ndarray:
    """Vectorized inverse of theta1 on (2pi, inf): bracketed Newton, bisection fallback."""
    A = np.atleast_1d(np.asarray(target, dtype=np.longdouble))
    if np.any(A <= theta1(np.longdouble(2) * PI_L)):
        raise DomainError("target lies below theta1(2pi); no node exists")
    k = _seed(A).astype(np.longdouble)
    lo = np.full_like(A, 2 * PI_L)
    hi = np.maximum(2 * k, lo + 8)
    while np.any(theta1(hi) <= A):
        hi = np.where(theta1(hi) <= A, 2 * hi, hi)
    res = theta1(k) - A
    for _ in range(MAX_ITER):
        lo = np.where(res < 0, np.maximum(lo, k), lo)
        hi = np.where(res > 0, np.minimum(hi, k), hi)
        done = np.abs(res) <= 1e-13 + _EPS_L16 * np.abs(A)
        if np.all(done):
            break
        step = k - res / theta1_deriv(k)
        inside = (step > lo) & (step < hi)
        k = np.where(done, k, np.where(inside, step, (lo + hi) / 2))
        res = theta1(k) - A
    bad = ~(np.abs(res) < RESIDUAL_TOL)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ConvergenceError(f"theta1 inversion failed: target {A[i]}, residual {res[i]}")
    return k


def node(q: NodeQuery) -> np.longdouble:
    """k_nu(tau) with |theta1(k) - (pi nu + tau)/3| < 1e-9."""
    return solve_theta1(q.target)[0]


def node_values(nu, tau=0.0) -> np.ndarray:
    """Vectorized k_nu(tau) over arrays of indices (and optionally phases)."""
    nu = np.asarray(nu)
    tau_arr = np.asarray(tau, dtype=np.float64)
    if nu.size and (np.any(nu < 1)):
        raise DomainError("nu must be >= 1")
    if np.any(np.abs(tau_arr) > math.pi):
        raise DomainError("tau must lie in [-pi, pi]")
    if nu.size == 0:
        return np.empty(0, dtype=np.longdouble)
    return solve_theta1(node_target(nu, tau_arr)).reshape(np.broadcast(nu, tau_arr).shape)


def nodes_in_window(T: float, U: float, parity: str) -> list[int]:
    """Indices nu of the given parity ('even' or 'odd') with T <= k_nu(0) <= T + U."""
    if parity not in ("even", "odd"):
        raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")
    if not T >= T_MIN:
        raise DomainError(f"T must be >= {T_MIN}")
    if not U > 0:
        raise DomainError("U must be positive")
    lo_t = np.longdouble(T)
    hi_t = np.longdouble(T) + np.longdouble(U)
    first = max(1, int(np.ceil(3 * theta1(lo_t) / PI_L)))
    last = int(np.floor(3 * theta1(hi_t) / PI_L))
    # the phase-space estimate may be off by one at the edges
    while first > 1 and node_values(first - 1)[()] >= lo_t:
        first -= 1
    while first <= last and node_values(first)[()] < lo_t:
        first += 1
    while node_values(last + 1)[()] <= hi_t:
        last += 1
    while last >= first and node_values(last)[()] > hi_t:
        last -= 1
    want = 0 if parity == "even" else 1
    start = first + ((first - want) % 2)
    return list(range(start, last + 1, 2))


def spacing_estimate(t: float) -> float:
    """Mean node spacing pi / (3 theta1'(t))."""
    if not t > _TWO_PI_E:
        raise DomainError("spacing_estimate requires t > 2*pi*e")
    return math.pi / (3 * float(theta1_deriv(float(t))))
