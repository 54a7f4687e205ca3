"""Sign-partitioned integrals I+ and I- over G5(x) and G6(x) at several T.

    python scripts/equal_areas.py --T 1e5 1e6 --U 1e4 --x 1.4707963
"""

import argparse
import json
import math
import os
import time
from pathlib import Path

from zladder.experiments import run_equal_areas, symmetric_config
from zladder.plots import emit_trend


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--T", type=float, nargs="+", default=[1e5, 1e6])
    p.add_argument("--U", type=float, default=1e4)
    p.add_argument("--x", type=float, default=math.pi / 2 - 0.1)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default="runs/areas")
    args = p.parse_args()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    runs, series = [], []
    print(f"{'T':>8} {'I+':>12} {'I-':>12} {'ratio':>8} {'gap':>9} {'secs':>6}")
    for T in args.T:
        r = args.k * math.pi / math.log(math.sqrt(T / (2 * math.pi)))
        cfg = symmetric_config(T, args.U, args.x, rho=(0.0, r, r), threads=args.threads)
        t0 = time.perf_counter()
        rep = run_equal_areas(cfg)
        secs = time.perf_counter() - t0
        print(f"{T:8.0e} {rep.i_plus:12.6g} {rep.i_minus:12.6g} {rep.cancellation_ratio:8.4f} "
              f"{rep.additivity_gap_g5 + rep.additivity_gap_g6:9.2g} {secs:6.0f}")
        runs.append({"config": cfg.to_dict(), **rep.to_dict(), "runtime_s": secs})
        series.append((T, rep.cancellation_ratio))
    emit_trend(series, out, "cancellation ratio")
    out.with_suffix(".json").write_text(json.dumps(runs, indent=2) + "\n")


if __name__ == "__main__":
    main()
