"""Distance between [T, T+U] and its surrogate ladder image as T grows, U = T^(13/16).

Also draws a G5 set next to its image at a small height.

    python scripts/receding_sets.py --out runs/receding
"""

import argparse
import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from zladder.ladder import disjointness_report, map_set
from zladder.plots import emit_geometry, emit_trend
from zladder.sets import build_set


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--exponents", type=int, nargs="+", default=list(range(5, 21)))
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--out", default="runs/receding")
    args = p.parse_args()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    reports = []
    print(f"{'T':>8} {'U':>10} {'d':>12} {'d/d_pred':>9} {'bound':>11} disjoint regime")
    for e in args.exponents:
        T = 10.0 ** e
        rep = disjointness_report(T, T ** (13 / 16), args.eps)
        reports.append(asdict(rep))
        print(f"{T:8.0e} {rep.U:10.3e} {rep.d:12.4e} {rep.d / rep.d_predicted:9.6f} {rep.gap_bound:11.3e} "
              f"{rep.disjoint!s:>8} {rep.regime_reached}")
    emit_trend([(r["T"], r["d"] / r["T"]) for r in reports], out, "d / T")
    out.with_suffix(".json").write_text(json.dumps(reports, indent=2) + "\n")

    s = build_set("G5", -np.pi / 2, np.pi / 2, 1e4, 30.0)
    emit_geometry({"G5": s, "G5 image": map_set(s)}, out.with_name(out.name + "_geometry"))


if __name__ == "__main__":
    main()
