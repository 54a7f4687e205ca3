"""Plain-text plot data and self-contained SVG renderings."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .sets import DisjointSet

W, H, PAD = 900, 360, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _svg(body: list[str], title: str) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n'
            f'<title>{escape(title)}</title>\n'
            f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>\n'
            f'<line id="x-axis" x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>\n'
            f'<line id="y-axis" x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>\n')
    return head + "".join(body) + "</svg>\n"


def emit_geometry(sets: dict[str, DisjointSet], path) -> tuple[Path, Path]:
    """Interval bands, one row per labelled set: ``path``.dat (label lo hi) and ``path``.svg."""
    base = Path(path)
    dat, svg = base.with_suffix(".dat"), base.with_suffix(".svg")
    rows = ["# label lo hi"]
    for label, s in sets.items():
        rows += [f"{label} {lo:.17g} {hi:.17g}" for lo, hi in zip(s.lo, s.hi)]
    _write(dat, "\n".join(rows) + "\n")

    nonempty = [s for s in sets.values() if len(s)]
    body = []
    if nonempty:
        t0 = min(float(s.lo[0]) for s in nonempty)
        t1 = max(float(s.hi[-1]) for s in nonempty)
        span = (t1 - t0) or 1.0
        band_h = (H - 2 * PAD) / max(1, len(sets)) * 0.6
        for i, (label, s) in enumerate(sets.items()):
            y = PAD + i * (H - 2 * PAD) / max(1, len(sets)) + band_h * 0.3
            body.append(f'<g id="band-{i}" data-label="{escape(label)}" fill="{COLORS[i % len(COLORS)]}">\n')
            for lo, hi in zip(s.lo, s.hi):
                x = PAD + (lo - t0) / span * (W - 2 * PAD)
                w = max((hi - lo) / span * (W - 2 * PAD), 0.5)
                body.append(f'<rect x="{x:.3f}" y="{y:.1f}" width="{w:.3f}" height="{band_h:.1f}" '
                            f'data-lo="{lo:.17g}" data-hi="{hi:.17g}"/>\n')
            body.append(f'<text x="{W - PAD + 4}" y="{y + band_h / 2:.1f}" font-size="11">'
                        f'{escape(label)}</text>\n</g>\n')
        body.append(f'<text x="{PAD}" y="{H - PAD + 20}" font-size="11">t = {t0:.6g}</text>\n'
                    f'<text x="{W - PAD - 90}" y="{H - PAD + 20}" font-size="11">t = {t1:.6g}</text>\n')
    _write(svg, _svg(body, "interval geometry"))
    return dat, svg


def emit_trend(series: list[tuple[float, float]], path, ylabel: str = "rel_dev") -> tuple[Path, Path]:
    """Two-column (T, value) data file and a log-x line plot."""
    base = Path(path)
    dat, svg = base.with_suffix(".dat"), base.with_suffix(".svg")
    _write(dat, "\n".join([f"# T {ylabel}"] + [f"{T:.17g} {v:.17g}" for T, v in series]) + "\n")
    body = []
    pts = [(T, v) for T, v in series if T > 0 and math.isfinite(v)]
    if pts:
        lx = [math.log10(T) for T, _ in pts]
        ys = [v for _, v in pts]
        x0, x1 = min(lx), max(lx)
        y0, y1 = min(0.0, min(ys)), max(ys)
        sx = (W - 2 * PAD) / ((x1 - x0) or 1.0)
        sy = (H - 2 * PAD) / ((y1 - y0) or 1.0)
        coords = [(PAD + (a - x0) * sx, H - PAD - (b - y0) * sy) for a, b in zip(lx, ys)]
        body.append('<polyline id="series" fill="none" stroke="#1f77b4" points="'
                    + " ".join(f"{x:.2f},{y:.2f}" for x, y in coords) + '"/>\n')
        for (x, y), (T, v) in zip(coords, pts):
            body.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#1f77b4" data-T="{T:.17g}" '
                        f'data-v="{v:.17g}"/>\n')
    body.append(f'<text x="{PAD}" y="{PAD - 10}" font-size="12">{escape(ylabel)} vs log10 T</text>\n')
    _write(svg, _svg(body, f"{ylabel} vs T"))
    return dat, svg


def emit_plot_data(reports, path):
    """Dispatch on the report set: a mapping of labelled sets, or a (T, value) series."""
    if isinstance(reports, dict):
        return emit_geometry(reports, path)
    return emit_trend(list(reports), path)
