"""Composite Gauss-Legendre quadrature over disjoint interval sets.

Each interval is cut into panels no wider than 1/8 of the local node spacing.
A panel is accepted when its order-16 value and the sum over its two halves
differ by less than tol * width / measure(s); otherwise it is halved.  Panel
values are combined by a fixed-order pairwise tree, so results do not depend
on the number of worker threads.

Integrands are vectorized callables f(t: ndarray) -> ndarray that act
elementwise; evaluation is split into fixed-size chunks that may be handed to
a thread pool.  An integrand may instead return (values, abs_errors); the
integrated error then sets a floor below which the two rules are taken to
agree, since no refinement can beat the accuracy of f itself.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError
from .nodes import spacing_estimate
from .sets import DisjointSet, measure

ORDER = 16
MAX_DEPTH = 20
PANELS_PER_SPACING = 8
SCAN_PER_SPACING = 64
ROOT_TOL = 1e-9
_EVAL_CHUNK = 1 << 15
_PANEL_BLOCK = 1 << 14
_ROUNDING = 64 * np.finfo(np.float64).eps
_TWO_PI_E = 2 * math.pi * math.e

_GL_X, _GL_W = np.polynomial.legendre.leggauss(ORDER)

Integrand = Callable[[np.ndarray], np.ndarray]


class RootRefinementError(ConvergenceError):
    pass


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_estimate: float
    panels: int
    evals: int


def pairwise_sum(values: np.ndarray) -> float:
    """Tree summation in the given order."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return 0.0
    while v.size > 1:
        if v.size % 2:
            v = np.append(v, 0.0)
        v = v[0::2] + v[1::2]
    return float(v[0])


def evaluate_with_errors(f: Integrand, t: np.ndarray, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Apply f to a flat array in fixed chunks, optionally on a thread pool."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty_like(t)
    err = np.zeros_like(t)
    bounds = [(s, min(s + _EVAL_CHUNK, t.size)) for s in range(0, t.size, _EVAL_CHUNK)]

    def work(b):
        r = f(t[b[0]:b[1]])
        if isinstance(r, tuple):
            out[b[0]:b[1]], err[b[0]:b[1]] = r
        else:
            out[b[0]:b[1]] = r

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, bounds))
    else:
        for b in bounds:
            work(b)
    if not np.all(np.isfinite(out)):
        raise ConvergenceError("integrand returned non-finite values")
    return out, err


def evaluate(f: Integrand, t: np.ndarray, threads: int = 1) -> np.ndarray:
    return evaluate_with_errors(f, t, threads)[0]


def _local_spacing(lo: np.ndarray) -> np.ndarray:
    """Mean node spacing at each point, or +inf where it is undefined."""
    out = np.full(lo.shape, np.inf)
    ok = lo > _TWO_PI_E
    out[ok] = math.pi / (3 * 0.5 * np.log(lo[ok] / (2 * math.pi)))
    return out


def split_at(lo: np.ndarray, hi: np.ndarray, breakpoints) -> tuple[np.ndarray, np.ndarray]:
    """Cut intervals at every breakpoint strictly inside them."""
    bp = np.unique(np.asarray(breakpoints, dtype=np.float64))
    if bp.size == 0 or lo.size == 0:
        return lo, hi
    first = np.searchsorted(bp, lo, side="right")
    last = np.searchsorted(bp, hi, side="left")
    cuts = np.maximum(last - first, 0)
    if not cuts.any():
        return lo, hi
    pieces = cuts + 1
    owner = np.repeat(np.arange(lo.size), pieces)
    pos = np.arange(owner.size) - np.repeat(np.cumsum(pieces) - pieces, pieces)
    bp_at = first[owner] + pos
    new_lo = np.where(pos == 0, lo[owner], bp[np.clip(bp_at - 1, 0, bp.size - 1)])
    new_hi = np.where(pos == pieces[owner] - 1, hi[owner], bp[np.clip(bp_at, 0, bp.size - 1)])
    return new_lo, new_hi


def seed_panels(s: DisjointSet, max_width: float | None = None,
                breakpoints=None) -> tuple[np.ndarray, np.ndarray]:
    """Initial panel edges: every interval split evenly into panels of width <= max_width.

    Breakpoints (known jumps of the integrand) always fall on panel edges.
    """
    lo, hi = (s.lo, s.hi) if breakpoints is None else split_at(s.lo, s.hi, breakpoints)
    lengths = hi - lo
    if max_width is None:
        width = _local_spacing(lo) / PANELS_PER_SPACING
    else:
        width = np.full(lengths.shape, float(max_width))
    counts = np.where(lengths > 0, np.maximum(1, np.ceil(lengths / width)), 0).astype(np.int64)
    owner = np.repeat(np.arange(lo.size), counts)
    pos = np.arange(owner.size) - np.repeat(np.cumsum(counts) - counts, counts)
    step = lengths[owner] / counts[owner]
    a = lo[owner] + pos * step
    # each panel ends exactly where the next one starts, so panels tile the interval
    b = np.where(pos == counts[owner] - 1, hi[owner], lo[owner] + (pos + 1) * step)
    return a, b


def _gl(f: Integrand, a: np.ndarray, b: np.ndarray, threads: int) -> tuple[np.ndarray, np.ndarray]:
    """Order-16 Gauss-Legendre value of f, and of |f| + err(f), on each panel [a_i, b_i]."""
    half = (b - a) / 2
    pts = (a + half)[:, None] + half[:, None] * _GL_X[None, :]
    vals, errs = evaluate_with_errors(f, pts.ravel(), threads)
    vals = vals.reshape(pts.shape)
    bound = _ROUNDING * np.abs(vals) + errs.reshape(pts.shape)
    return half * (vals @ _GL_W), half * (bound @ _GL_W)


def integrate(f: Integrand, s: DisjointSet, tol: float = 1e-6, threads: int = 1,
              max_panel_width: float | None = None, breakpoints=None,
              max_panels: int = 1 << 22) -> QuadResult:
    """Integral of f over s; ``breakpoints`` lists points where f may jump."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    total_measure = measure(s)
    a, b = seed_panels(s, max_panel_width, breakpoints)
    if a.size == 0 or total_measure == 0:
        return QuadResult(0.0, 0.0, 0, 0)

    acc_a, acc_v, acc_e = [], [], []
    evals = 0
    coarse = None
    for depth in range(MAX_DEPTH + 1):
        if a.size == 0:
            break
        next_a, next_b, next_c = [], [], []
        for lo in range(0, a.size, _PANEL_BLOCK):
            pa, pb = a[lo:lo + _PANEL_BLOCK], b[lo:lo + _PANEL_BLOCK]
            mid = (pa + pb) / 2
            if coarse is None:
                q1 = _gl(f, pa, pb, threads)[0]
                evals += ORDER * pa.size
            else:
                q1 = coarse[lo:lo + _PANEL_BLOCK]
            left, floor_l = _gl(f, pa, mid, threads)
            right, floor_r = _gl(f, mid, pb, threads)
            evals += 2 * ORDER * pa.size
            q2 = left + right
            diff = np.abs(q2 - q1)
            ok = diff <= np.maximum(tol * (pb - pa) / total_measure, floor_l + floor_r)
            acc_a.append(pa[ok])
            acc_v.append(q2[ok])
            acc_e.append(diff[ok])
            bad = ~ok
            if np.any(bad):
                if depth == MAX_DEPTH:
                    i = int(np.argmax(bad))
                    raise ConvergenceError(
                        f"panel [{pa[i]!r}, {pb[i]!r}] not converged after {MAX_DEPTH} halvings")
                next_a += [pa[bad], mid[bad]]
                next_b += [mid[bad], pb[bad]]
                next_c += [left[bad], right[bad]]
        if next_a and sum(x.size for x in next_a) > max_panels:
            raise ConvergenceError(f"more than {max_panels} unconverged panels at depth {depth + 1}")
        if next_a:
            a, b, coarse = np.concatenate(next_a), np.concatenate(next_b), np.concatenate(next_c)
        else:
            a = np.empty(0)

    starts = np.concatenate(acc_a)
    order = np.argsort(starts, kind="stable")
    values = np.concatenate(acc_v)[order]
    errs = np.concatenate(acc_e)[order]
    return QuadResult(pairwise_sum(values), pairwise_sum(errs), int(values.size), evals)


def _sgn(v: np.ndarray) -> np.ndarray:
    # zero counts as positive; the root is then a grid point of measure zero
    return np.where(v >= 0, 1, -1)


def sign_partition(s: DisjointSet, g: Integrand, threads: int = 1,
                   scan_step: float | None = None) -> tuple[DisjointSet, DisjointSet]:
    """Split s into the pieces where g > 0 and where g < 0.

    Sign changes are detected on a grid of step spacing/64 and refined by
    bisection to 1e-9 in t.
    """
    if len(s) == 0:
        return s.with_intervals([], [], [], "+"), s.with_intervals([], [], [], "-")
    lengths = s.hi - s.lo
    if scan_step is None:
        step = _local_spacing(s.lo) / SCAN_PER_SPACING
        step = np.where(np.isfinite(step), step, np.maximum(lengths, 1.0) / SCAN_PER_SPACING)
    else:
        step = np.full(lengths.shape, float(scan_step))
    npts = np.maximum(2, np.ceil(lengths / step).astype(np.int64) + 1)
    owner = np.repeat(np.arange(len(s)), npts)
    pos = np.arange(owner.size) - np.repeat(np.cumsum(npts) - npts, npts)
    grid = s.lo[owner] + lengths[owner] * pos / (npts[owner] - 1)
    grid = np.where(pos == npts[owner] - 1, s.hi[owner], grid)
    sg = _sgn(evaluate(g, grid, threads))

    same_owner = owner[1:] == owner[:-1]
    change = np.nonzero(same_owner & (sg[1:] != sg[:-1]))[0]
    ra, rb = grid[change].copy(), grid[change + 1].copy()
    sa = sg[change]
    while ra.size and np.max(rb - ra) > ROOT_TOL:
        mid = (ra + rb) / 2
        sm = _sgn(evaluate(g, mid, threads))
        left = sm != sa
        rb = np.where(left, mid, rb)
        ra = np.where(left, ra, mid)
    if ra.size:
        check = _sgn(evaluate(g, np.concatenate([ra, rb]), threads))
        broken = check[:ra.size] == check[ra.size:]
        if np.any(broken):
            i = int(np.argmax(broken))
            k = owner[change[i]]
            raise RootRefinementError(
                f"bisection bracket [{ra[i]!r}, {rb[i]!r}] lost its sign change inside "
                f"interval [{s.lo[k]!r}, {s.hi[k]!r}]; scan step too coarse")
    roots = (ra + rb) / 2
    root_owner = owner[change]

    # pieces: [lo, r1], [r1, r2], ..., [rm, hi] per interval; piece sign from its first grid sample
    first_sign = sg[np.cumsum(npts) - npts]
    nroots = np.bincount(root_owner, minlength=len(s))
    npieces = nroots + 1
    piece_owner = np.repeat(np.arange(len(s)), npieces)
    piece_pos = np.arange(piece_owner.size) - np.repeat(np.cumsum(npieces) - npieces, npieces)
    root_start = np.cumsum(nroots) - nroots
    starts = np.empty(piece_owner.size)
    ends = np.empty(piece_owner.size)
    is_first = piece_pos == 0
    is_last = piece_pos == npieces[piece_owner] - 1
    r_idx_start = root_start[piece_owner] + piece_pos - 1
    r_idx_end = root_start[piece_owner] + piece_pos
    starts[is_first] = s.lo[piece_owner[is_first]]
    starts[~is_first] = roots[r_idx_start[~is_first]]
    ends[is_last] = s.hi[piece_owner[is_last]]
    ends[~is_last] = roots[r_idx_end[~is_last]]
    signs = first_sign[piece_owner] * np.where(piece_pos % 2 == 0, 1, -1)
    idx = s.index[piece_owner]
    plus = signs > 0
    minus = ~plus
    return (s.with_intervals(starts[plus], ends[plus], idx[plus], "+"),
            s.with_intervals(starts[minus], ends[minus], idx[minus], "-"))
