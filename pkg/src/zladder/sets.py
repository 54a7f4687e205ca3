"""The disconnected sets G5 (even nodes) and G6 (odd nodes) as interval lists."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .nodes import node_values, nodes_in_window
from .rs_zeta import ShiftTriple

FAMILIES = {"G5": "even", "G6": "odd"}
HALF_PI = math.pi / 2


class InvalidEndpointError(DomainError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.hi < self.lo:
            raise DomainError(f"bad interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True, eq=False)
class DisjointSet:
    """Sorted, strictly disjoint closed intervals, stored column-wise.

    ``index`` holds the node index nu that generated each interval (or -1 for
    intervals that did not come from a node, e.g. sign-partition pieces keep
    their parent's index).  Arrays are read-only after construction.
    """

    lo: np.ndarray
    hi: np.ndarray
    index: np.ndarray
    family: str | None = None
    T: float | None = None
    U: float | None = None
    endpoints: tuple[float, float] | None = None
    label: str = ""

    def __post_init__(self):
        lo = np.ascontiguousarray(self.lo, dtype=np.float64)
        hi = np.ascontiguousarray(self.hi, dtype=np.float64)
        idx = np.ascontiguousarray(self.index, dtype=np.int64)
        if not (lo.shape == hi.shape == idx.shape) or lo.ndim != 1:
            raise DomainError("lo, hi and index must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise DomainError("interval endpoints must be finite")
        if np.any(hi < lo):
            raise DomainError("interval with hi < lo")
        if lo.size > 1 and not np.all(hi[:-1] < lo[1:]):
            raise DomainError("intervals must be sorted and strictly disjoint")
        for name, arr in (("lo", lo), ("hi", hi), ("index", idx)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_intervals(cls, intervals, **meta) -> "DisjointSet":
        pairs = [(iv.lo, iv.hi) if isinstance(iv, Interval) else tuple(iv) for iv in intervals]
        lo = np.array([p[0] for p in pairs], dtype=np.float64)
        hi = np.array([p[1] for p in pairs], dtype=np.float64)
        return cls(lo, hi, np.full(lo.size, -1), **meta)

    @classmethod
    def empty(cls, **meta) -> "DisjointSet":
        return cls(np.empty(0), np.empty(0), np.empty(0, dtype=np.int64), **meta)

    def __len__(self) -> int:
        return int(self.lo.size)

    @property
    def intervals(self) -> list[Interval]:
        return [Interval(float(a), float(b)) for a, b in zip(self.lo, self.hi)]

    @property
    def lengths(self) -> np.ndarray:
        return self.hi - self.lo

    def with_intervals(self, lo, hi, index, label: str = "") -> "DisjointSet":
        return DisjointSet(lo, hi, index, self.family, self.T, self.U, self.endpoints, label or self.label)

    def contains(self, other: "DisjointSet") -> bool:
        """True if every interval of ``other`` lies inside one interval of self."""
        if len(other) == 0:
            return True
        if len(self) == 0:
            return False
        j = np.searchsorted(self.lo, other.lo, side="right") - 1
        ok = j >= 0
        jj = np.clip(j, 0, None)
        return bool(np.all(ok & (self.lo[jj] <= other.lo) & (other.hi <= self.hi[jj])))


def _family(family: str) -> str:
    key = str(family).upper()
    if key not in FAMILIES:
        raise DomainError(f"family must be G5 or G6, got {family!r}")
    return key


def check_endpoints(a1: float, a2: float) -> None:
    if not (-HALF_PI <= a1 < a2 <= HALF_PI):
        raise InvalidEndpointError(f"need -pi/2 <= a1 < a2 <= pi/2, got a1={a1}, a2={a2}")


def build_set(family: str, a1: float, a2: float, T: float, U: float) -> DisjointSet:
    """G5(a1, a2, T, U) or G6(a1, a2, T, U): intervals [k_nu(a1), k_nu(a2)] over window nodes.

    A node belongs to the window when T <= k_nu(0) <= T + U, even if its
    interval sticks out of [T, T + U].
    """
    fam = _family(family)
    check_endpoints(a1, a2)
    idx = np.array(nodes_in_window(T, U, FAMILIES[fam]), dtype=np.int64)
    lo = node_values(idx, a1).astype(np.float64)
    hi = node_values(idx, a2).astype(np.float64)
    return DisjointSet(lo, hi, idx, fam, float(T), float(U), (float(a1), float(a2)))


def measure(s: DisjointSet) -> float:
    return float(np.sum(s.hi - s.lo))


def density_measure(a1: float, a2: float, U: float) -> float:
    """Asymptotic measure (a2 - a1) U / (2 pi) of G5 or G6."""
    return (a2 - a1) * U / (2 * math.pi)


@dataclass
class WindowReport:
    T: float
    U: float
    eps: float
    U_min: float
    U_max: float
    U_in_window: bool
    rho_bound: float
    rho_ok: bool
    P: float
    warnings: list[str] = field(default_factory=list)


def validate_window(T: float, U: float, eps: float, shifts: ShiftTriple | None = None) -> WindowReport:
    """Check T^(13/16+2eps) <= U <= T^(7/8+eps/2) and |rho_i| <= T^(1/48-eps).

    Violations are reported as warnings; at desk scale the window is usually missed.
    """
    if not (T > 0 and U > 0 and eps > 0):
        raise DomainError("T, U and eps must be positive")
    U_min = T ** (13 / 16 + 2 * eps)
    U_max = T ** (7 / 8 + eps / 2)
    rho_bound = T ** (1 / 48 - eps)
    rhos = shifts.rhos if shifts is not None else (0.0, 0.0, 0.0)
    warnings = []
    if U < U_min:
        warnings.append(f"U={U:g} below admissible window: U_min=T^(13/16+2eps)={U_min:.6g}")
    if U > U_max:
        warnings.append(f"U={U:g} above admissible window: U_max=T^(7/8+eps/2)={U_max:.6g}")
    rho_ok = all(abs(r) <= rho_bound for r in rhos)
    if not rho_ok:
        warnings.append(f"shift magnitude exceeds T^(1/48-eps)={rho_bound:.6g}: {rhos}")
    return WindowReport(T, U, eps, U_min, U_max, U_min <= U <= U_max, rho_bound, rho_ok,
                        math.sqrt(T / (2 * math.pi)), warnings)
