"""G5/G6 correlation integrals of Z^3 at increasing T, with the odd/even split.

    python scripts/correlation_trend.py --T 1e4 1e5 1e6 --U 1e4 --out runs/trend
"""

import argparse
import json
import math
import os
import time
from pathlib import Path

from zladder.experiments import ExperimentConfig, run_correlation_pair
from zladder.plots import emit_trend


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--T", type=float, nargs="+", default=[1e4, 1e5, 1e6])
    p.add_argument("--U", type=float, default=1e4)
    p.add_argument("--x", type=float, default=math.pi / 2, help="half-width: x1 = -x, x2 = x")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default="runs/trend")
    args = p.parse_args()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    runs, series = [], []
    print(f"{'T':>8} {'G5':>12} {'G6':>12} {'main':>10} {'rel_dev':>8} {'odd_rel':>9} {'secs':>6}")
    for T in args.T:
        cfg = ExperimentConfig.make(T, args.U, -args.x, args.x, quad_tol=args.tol, threads=args.threads)
        t0 = time.perf_counter()
        pair = run_correlation_pair(cfg)
        secs = time.perf_counter() - t0
        print(f"{T:8.0e} {pair.g5.lhs_cubic:12.6g} {pair.g6.lhs_cubic:12.6g} {pair.g5.main_term:10.6g} "
              f"{pair.g5.rel_dev:8.4g} {pair.odd_rel_dev:9.2g} {secs:6.0f}")
        runs.append({"config": cfg.to_dict(), **pair.to_dict(), "runtime_s": secs})
        series.append((T, pair.g5.rel_dev))
    emit_trend(series, out, "rel_dev")
    out.with_suffix(".json").write_text(json.dumps(runs, indent=2) + "\n")


if __name__ == "__main__":
    main()
