"""Correlation experiments over G5/G6: main terms, degeneracy guard and runners.

Every integral is computed on the cubic side,
    I(G) = integral over G of Z(t+rho1) Z(t+rho2) Z(t+rho3) dt,
and the weighted fifth-order integral over the image set is reported as
exactly 2 I(G), by the transformation identity that relates the two.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import DomainError
from .quad import QuadResult, integrate, sign_partition
from .rs_zeta import T_CEILING, T_MIN, ShiftTriple, z_breakpoints, z_triple_values, z_triple_with_bounds
from .sets import DisjointSet, build_set, check_endpoints, measure, validate_window

DEGENERACY_GUARD = 0.1
DEFAULT_EPS = 0.01


@dataclass(frozen=True)
class ExperimentConfig:
    T: float
    U: float
    x1: float
    x2: float
    y1: float
    y2: float
    shifts: ShiftTriple
    eps: float = DEFAULT_EPS
    quad_tol: float = 1e-6
    threads: int = 1

    def __post_init__(self):
        check_endpoints(self.x1, self.x2)
        check_endpoints(self.y1, self.y2)
        if not (self.T > 0 and self.U > 0 and self.eps > 0 and self.quad_tol > 0):
            raise DomainError("T, U, eps and quad_tol must be positive")
        if abs(self.shifts.P ** 2 - self.T / (2 * math.pi)) > 1e-12 * self.T:
            raise DomainError("shifts.P does not match sqrt(T / 2pi)")

    @classmethod
    def make(cls, T, U, x1=-math.pi / 2, x2=math.pi / 2, y1=None, y2=None, rho=(0.0, 0.0, 0.0),
             **kw) -> "ExperimentConfig":
        y1 = x1 if y1 is None else y1
        y2 = x2 if y2 is None else y2
        return cls(float(T), float(U), float(x1), float(x2), float(y1), float(y2),
                   ShiftTriple.at(T, *rho), **kw)

    def with_shifts(self, *rho) -> "ExperimentConfig":
        return replace(self, shifts=ShiftTriple.at(self.T, *rho))

    def endpoints(self, family: str) -> tuple[float, float]:
        return (self.x1, self.x2) if family.upper() == "G5" else (self.y1, self.y2)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["shifts"] = {"rho1": self.shifts.rho1, "rho2": self.shifts.rho2,
                       "rho3": self.shifts.rho3, "P": self.shifts.P}
        return d


def main_term(family: str, a1: float, a2: float, U: float, shifts: ShiftTriple) -> float:
    """+-(2/pi) U sin((a2-a1)/2) cos((a1+a2)/2 + (rho1+rho2+rho3) ln P); + for G5, - for G6."""
    sign = _sign(family)
    phase = (a1 + a2) / 2 + shifts.total * math.log(shifts.P)
    return sign * 2 / math.pi * U * math.sin((a2 - a1) / 2) * math.cos(phase)


def _sign(family: str) -> float:
    fam = family.upper()
    if fam not in ("G5", "G6"):
        raise DomainError(f"family must be G5 or G6, got {family!r}")
    return 1.0 if fam == "G5" else -1.0


def shift_bound_L(T: float, eps: float) -> int:
    """L = ceil(T^(1/48 - eps) ln T): the admissible range |k| <= L."""
    return math.ceil(T ** (1 / 48 - eps) * math.log(T))


def degeneracy_check(cfg: ExperimentConfig) -> list[str]:
    """Warn when a1 = a2 or the phase a1 + a2 + 2 sum(rho) ln P is near an odd multiple of pi."""
    L = shift_bound_L(cfg.T, cfg.eps)
    shift_phase = 2 * cfg.shifts.total * math.log(cfg.shifts.P)
    out = []
    for name, (a1, a2) in (("x", (cfg.x1, cfg.x2)), ("y", (cfg.y1, cfg.y2))):
        if a1 == a2:
            out.append(f"{name}1 == {name}2: vanishing set")
        phase = a1 + a2 + shift_phase
        k = round((phase - math.pi) / (2 * math.pi))
        gap = abs(phase - (2 * k + 1) * math.pi)
        if abs(k) <= L and gap < DEGENERACY_GUARD:
            out.append(f"{name}-phase {phase:.6g} within {gap:.3g} rad of (2k+1)pi, k={k}: "
                       "main term degenerate")
    return out


@dataclass
class CorrelationReport:
    family: str
    T: float
    U: float
    a1: float
    a2: float
    rho: list[float]
    lhs_cubic: float
    lhs_hatted: float
    main_term: float
    error_scale: float
    abs_dev: float
    rel_dev: float
    quad_err: float
    set_measure: float
    n_intervals: int
    evals: int
    degeneracy_warnings: list[str] = field(default_factory=list)
    window_warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["warnings"] = self.degeneracy_warnings + self.window_warnings
        return d


def _guard(cfg: ExperimentConfig, s: DisjointSet) -> None:
    if cfg.T + cfg.U > T_CEILING:
        raise DomainError(f"T + U = {cfg.T + cfg.U:g} exceeds the Z precision ceiling {T_CEILING:g}")
    if len(s) and s.lo[0] + min(cfg.shifts.rhos) < T_MIN:
        raise DomainError("a shifted set endpoint falls below the Z domain")


def integrate_triple(s: DisjointSet, cfg: ExperimentConfig, tol: float | None = None) -> QuadResult:
    """Integral of Z(t+rho1)Z(t+rho2)Z(t+rho3) over s."""
    _guard(cfg, s)
    if len(s) == 0:
        return QuadResult(0.0, 0.0, 0, 0)
    shifts = cfg.shifts

    def f(t):
        return z_triple_with_bounds(t, shifts)

    bp = z_breakpoints(float(s.lo[0]), float(s.hi[-1]), shifts)
    return integrate(f, s, tol or cfg.quad_tol, threads=cfg.threads, breakpoints=bp)


def run_correlation(cfg: ExperimentConfig, family: str) -> CorrelationReport:
    fam = family.upper()
    _sign(fam)
    a1, a2 = cfg.endpoints(fam)
    s = build_set(fam, a1, a2, cfg.T, cfg.U)
    q = integrate_triple(s, cfg)
    mt = main_term(fam, a1, a2, cfg.U, cfg.shifts)
    abs_dev = abs(q.value - mt)
    rel_dev = abs_dev / abs(mt) if mt != 0 else math.inf
    name = "x" if fam == "G5" else "y"
    degeneracy = [w for w in degeneracy_check(cfg) if w.startswith(name)]
    window = validate_window(cfg.T, cfg.U, cfg.eps, cfg.shifts).warnings
    return CorrelationReport(fam, cfg.T, cfg.U, a1, a2, list(cfg.shifts.rhos), q.value, 2 * q.value, mt,
                             cfg.T ** (13 / 16), abs_dev, rel_dev, q.err_estimate, measure(s), len(s),
                             q.evals, degeneracy, window)


@dataclass
class PairReport:
    """G5 and G6 runs plus their odd/even decomposition.

    With mirrored endpoints the main terms are opposite, so (I5 - I6)/2 carries
    the main term while (I5 + I6)/2 is pure error term.
    """

    g5: CorrelationReport
    g6: CorrelationReport
    odd_part: float
    even_part: float
    odd_rel_dev: float

    def to_dict(self) -> dict:
        return {"g5": self.g5.to_dict(), "g6": self.g6.to_dict(), "odd_part": self.odd_part,
                "even_part": self.even_part, "odd_rel_dev": self.odd_rel_dev}


def run_correlation_pair(cfg: ExperimentConfig) -> PairReport:
    g5 = run_correlation(cfg, "G5")
    g6 = run_correlation(cfg, "G6")
    odd = (g5.lhs_cubic - g6.lhs_cubic) / 2
    even = (g5.lhs_cubic + g6.lhs_cubic) / 2
    ref = (g5.main_term - g6.main_term) / 2
    return PairReport(g5, g6, odd, even, abs(odd - ref) / abs(ref) if ref else math.inf)


def rho_k(k: int, z: float, P: float) -> float:
    """rho_k(z) = (2k pi + z) / (2 ln P)."""
    return (2 * k * math.pi + z) / (2 * math.log(P))


def split_main_term(family: str, a1: float, a2: float, U: float, z: float) -> float:
    """+-(2/pi) U sin((a2-a1)/2) cos((a1+a2)/2 + z); independent of k."""
    sign = _sign(family)
    # cos(c + z) = -cos(c + z - pi): keeps the z = 0 and z = pi values exact negatives
    if z > math.pi / 2:
        sign, z = -sign, z - math.pi
    return sign * 2 / math.pi * U * math.sin((a2 - a1) / 2) * math.cos((a1 + a2) / 2 + z)


@dataclass
class SplittingReport:
    k: int
    z: float
    rho: float
    g5: CorrelationReport
    g6: CorrelationReport
    split_main_g5: float
    split_main_g6: float

    def to_dict(self) -> dict:
        return {"k": self.k, "z": self.z, "rho": self.rho, "g5": self.g5.to_dict(), "g6": self.g6.to_dict(),
                "split_main_g5": self.split_main_g5, "split_main_g6": self.split_main_g6}


def run_splitting(cfg: ExperimentConfig, k: int, z: float) -> SplittingReport:
    """rho1 = 0, rho2 = rho3 = rho_k(z); compare G5 and G6 with the split main terms."""
    L = shift_bound_L(cfg.T, cfg.eps)
    if abs(k) > L:
        raise DomainError(f"|k| = {abs(k)} exceeds L = {L}")
    if not 0 <= z <= math.pi:
        raise DomainError("z must lie in [0, pi]")
    rho = rho_k(k, z, cfg.shifts.P)
    c = cfg.with_shifts(0.0, rho, rho)
    return SplittingReport(k, z, rho, run_correlation(c, "G5"), run_correlation(c, "G6"),
                           split_main_term("G5", c.x1, c.x2, c.U, z),
                           split_main_term("G6", c.y1, c.y2, c.U, z))


def run_four_way(cfg: ExperimentConfig, k: int) -> list[SplittingReport]:
    """The four-way comparison: z = 0 and z = pi, each on G5 and G6."""
    return [run_splitting(cfg, k, 0.0), run_splitting(cfg, k, math.pi)]


@dataclass
class CubicReport:
    x: float
    y: float
    g5: CorrelationReport
    g6: CorrelationReport

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "g5": self.g5.to_dict(), "g6": self.g6.to_dict()}


def symmetric_config(T, U, x, y=None, rho=(0.0, 0.0, 0.0), **kw) -> ExperimentConfig:
    y = x if y is None else y
    return ExperimentConfig.make(T, U, -x, x, -y, y, rho, **kw)


def run_cubic(T: float, U: float, x: float, y: float | None = None, **kw) -> CubicReport:
    """Z^3 over G5(-x, x) and G6(-y, y) against (2/pi) U sin x and -(2/pi) U sin y."""
    y = x if y is None else y
    if not (0 < x < math.pi / 2 and 0 < y < math.pi / 2):
        raise DomainError("need 0 < x, y < pi/2")
    cfg = symmetric_config(T, U, x, y, **kw)
    return CubicReport(x, y, run_correlation(cfg, "G5"), run_correlation(cfg, "G6"))


@dataclass
class EqualAreasReport:
    T: float
    U: float
    x: float
    k: int
    rho: list[float]
    i_plus: float
    i_minus: float
    g5_plus: float
    g5_minus: float
    g6_plus: float
    g6_minus: float
    g5_total: float
    g6_total: float
    additivity_gap_g5: float
    additivity_gap_g6: float
    additivity_tol: float
    cancellation_ratio: float
    lower_bound: float
    bound_plus_ok: bool
    bound_minus_ok: bool
    measure_plus: float
    measure_minus: float
    measure_total: float

    def to_dict(self) -> dict:
        return asdict(self)


def shift_sum_index(cfg: ExperimentConfig) -> int:
    """k with rho1 + rho2 + rho3 = 2k pi / ln P; rejects sums off that lattice by more than 1e-9."""
    lnP = math.log(cfg.shifts.P)
    k = round(cfg.shifts.total * lnP / (2 * math.pi))
    if abs(cfg.shifts.total - 2 * k * math.pi / lnP) > 1e-9:
        raise DomainError("rho1 + rho2 + rho3 is not of the form 2k pi / ln P")
    L = shift_bound_L(cfg.T, cfg.eps)
    if abs(k) > L:
        raise DomainError(f"|k| = {abs(k)} exceeds L = {L}")
    return k


def run_equal_areas(cfg: ExperimentConfig, bound_eps: float = 0.3) -> EqualAreasReport:
    """Sign-partitioned integrals over G5(x) and G6(x), with -x1 = x2 = x = -y1 = y2."""
    x = cfg.x2
    if not (cfg.x1 == -x and cfg.y1 == -x and cfg.y2 == x and 0 < x < math.pi / 2):
        raise DomainError("equal-areas runs need -x1 = x2 = -y1 = y2 = x with 0 < x < pi/2")
    k = shift_sum_index(cfg)
    shifts = cfg.shifts

    def g(t):
        return z_triple_values(t, shifts)

    parts = {}
    tol_sum = 0.0
    gaps = {}
    for fam in ("G5", "G6"):
        s = build_set(fam, -x, x, cfg.T, cfg.U)
        _guard(cfg, s)
        whole = integrate_triple(s, cfg)
        plus, minus = sign_partition(s, g, threads=cfg.threads)
        qp = integrate_triple(plus, cfg)
        qm = integrate_triple(minus, cfg)
        parts[fam] = (whole, qp, qm, measure(plus), measure(minus), measure(s))
        gaps[fam] = abs(whole.value - (qp.value + qm.value))
        tol_sum += whole.err_estimate + qp.err_estimate + qm.err_estimate + cfg.quad_tol * 3
    i_plus = parts["G5"][1].value + parts["G6"][1].value
    i_minus = parts["G5"][2].value + parts["G6"][2].value
    ratio = abs(i_plus + i_minus) / max(i_plus, -i_minus)
    lower = (1 - bound_eps) * 2 / math.pi * cfg.U * math.sin(x)
    return EqualAreasReport(
        cfg.T, cfg.U, x, k, list(shifts.rhos), i_plus, i_minus,
        parts["G5"][1].value, parts["G5"][2].value, parts["G6"][1].value, parts["G6"][2].value,
        parts["G5"][0].value, parts["G6"][0].value, gaps["G5"], gaps["G6"], tol_sum, ratio, lower,
        bool(0 < lower < i_plus), bool(0 < lower < -i_minus),
        parts["G5"][3] + parts["G6"][3], parts["G5"][4] + parts["G6"][4], parts["G5"][5] + parts["G6"][5])
