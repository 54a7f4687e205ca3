"""Command-line front end.

    zladder z --t 14.134725141734
    zladder sets --family g5 --T 1e5 --U 1e3 --x1 0 --x2 0.5 --format csv
    zladder correlate --T 1e6 --U 1e4 --x1 -1.5707 --x2 1.5707 --rho 0,0,0

Exit codes: 0 success, 1 validation error (bad flags or arguments outside a
domain), 2 numerical failure (a solver or quadrature did not converge).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConvergenceError
from .experiments import (ExperimentConfig, run_correlation_pair, run_cubic, run_equal_areas, run_four_way,
                          run_splitting, shift_sum_index, symmetric_config)
from .ladder import disjointness_report, map_set
from .nodes import node_target, node_values, nodes_in_window
from .plots import emit_plot_data
from .rs_zeta import theta1, z_with_bounds
from .sets import build_set, measure

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2
ANGLE_FLAGS = ("x1", "x2", "y1", "y2", "x", "y", "z", "tau")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _rho(text: str) -> tuple[float, float, float]:
    vals = _floats(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("--rho takes three comma-separated values")
    return tuple(vals)


def g17(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def manifest(command: str, argv: list[str], config: dict, reports: list, started: float) -> dict:
    return {
        "tool": "zladder",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "argv": list(argv),
        "config": config,
        "reports": reports,
        "runtime_s": time.perf_counter() - started,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def to_csv(rows: list[dict], config: dict) -> str:
    buf = io.StringIO()
    for k, v in config.items():
        buf.write(f"# {k}={json.dumps(v)}\n")
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([g17(v) for v in r.values()])
    return buf.getvalue()


def to_table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    cols = list(rows[0])

    def fmt(v):
        if isinstance(v, (float, np.floating)):
            return f"{float(v):.12g}"
        if isinstance(v, list):
            return ",".join(fmt(x) for x in v)
        return str(v)

    cells = [[fmt(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _flat(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flat(v, key + "."))
        elif isinstance(v, list) and any(isinstance(x, str) for x in v):
            out[key] = "; ".join(map(str, v))
        else:
            out[key] = v
    return out


# -- subcommands: each returns (config, reports, rows, text); text None means tabulate rows -------------------------


def cmd_z(a):
    ts = np.array(_floats(a.t))
    val, err = z_with_bounds(ts)
    rows = [{"t": float(t), "value": float(v), "err_bound": float(e)} for t, v, e in zip(ts, val, err)]
    return {"t": ts.tolist()}, rows, rows, None


def cmd_nodes(a):
    if a.T is not None:
        if a.U is None:
            raise ValueError("--T needs --U")
        nus = nodes_in_window(a.T, a.U, a.parity)
        cfg = {"T": a.T, "U": a.U, "parity": a.parity, "tau": a.tau}
    else:
        lo, _, hi = a.nu.partition(":")
        nus = list(range(int(lo), int(hi) + 1)) if hi else [int(lo)]
        cfg = {"nu": a.nu, "tau": a.tau}
    k = node_values(np.array(nus, dtype=np.int64), a.tau)
    res = theta1(k) - node_target(np.array(nus), a.tau) if len(nus) else []
    rows = [{"nu": int(n), "tau": a.tau, "k": float(kk), "residual": float(r)}
            for n, kk, r in zip(nus, k, res)]
    return cfg, rows, rows, None


def cmd_sets(a):
    s = build_set(a.family, a.x1, a.x2, a.T, a.U)
    cfg = {"family": s.family, "T": a.T, "U": a.U, "x1": a.x1, "x2": a.x2}
    rows = [{"nu": int(n), "lo": float(lo), "hi": float(hi), "length": float(hi - lo)}
            for n, lo, hi in zip(s.index, s.lo, s.hi)]
    report = {"family": s.family, "n_intervals": len(s), "measure": measure(s), "intervals": rows}
    if a.plot:
        emit_plot_data({s.family: s, s.family + " image": map_set(s)}, a.plot)
    return cfg, [report], rows, f"# {len(s)} intervals, measure {measure(s):.17g}\n" + to_table(rows)


def cmd_ladder(a):
    rep = disjointness_report(a.T, a.U, a.eps)
    d = asdict(rep)
    text = "".join(f"{k:>18}  {g17(v)}\n" for k, v in d.items())
    return {"T": a.T, "U": a.U, "eps": a.eps}, [d], [_flat(d)], text


def _config(a, T, **over) -> ExperimentConfig:
    kw = dict(x1=a.x1, x2=a.x2, y1=a.y1, y2=a.y2, rho=a.rho)
    kw.update(over)
    return ExperimentConfig.make(T, a.U, eps=a.eps, quad_tol=a.tol, threads=a.threads, **kw)


def cmd_correlate(a):
    reports, rows, series = [], [], []
    for T in _floats(a.T):
        pair = run_correlation_pair(_config(a, T))
        d = pair.to_dict()
        d["config"] = _config(a, T).to_dict()
        reports.append(d)
        for r in (pair.g5, pair.g6):
            rows.append({"family": r.family, "T": r.T, "U": r.U, "lhs_cubic": r.lhs_cubic,
                         "lhs_hatted": r.lhs_hatted, "main_term": r.main_term, "rel_dev": r.rel_dev,
                         "quad_err": r.quad_err, "warnings": "; ".join(r.to_dict()["warnings"])})
        series.append((T, pair.g5.rel_dev))
    if a.plot:
        emit_plot_data(series, a.plot)
    cfg = {"T": _floats(a.T), "U": a.U, "x1": a.x1, "x2": a.x2, "y1": a.y1, "y2": a.y2,
           "rho": list(a.rho), "eps": a.eps, "tol": a.tol}
    return cfg, reports, rows, None


def cmd_splitting(a):
    cfg = _config(a, float(a.T))
    reps = run_four_way(cfg, a.k) if a.four_way else [run_splitting(cfg, a.k, a.z)]
    rows = []
    for r in reps:
        rows.append({"z": r.z, "family": "G5", "integral": r.g5.lhs_cubic, "main": r.split_main_g5})
        rows.append({"z": r.z, "family": "G6", "integral": r.g6.lhs_cubic, "main": r.split_main_g6})
    return cfg.to_dict() | {"k": a.k, "z": a.z}, [r.to_dict() for r in reps], rows, None


def cmd_cubic(a):
    rep = run_cubic(float(a.T), a.U, a.x, a.y, eps=a.eps, quad_tol=a.tol, threads=a.threads)
    rows = [{"family": r.family, "integral": r.lhs_cubic, "main_term": r.main_term, "rel_dev": r.rel_dev}
            for r in (rep.g5, rep.g6)]
    return {"T": a.T, "U": a.U, "x": a.x, "y": a.y}, [rep.to_dict()], rows, None


def cmd_areas(a):
    T = float(a.T)
    if a.rho is not None:
        cfg = symmetric_config(T, a.U, a.x, rho=a.rho, eps=a.eps, quad_tol=a.tol, threads=a.threads)
    else:
        r = a.k * math.pi / math.log(math.sqrt(T / (2 * math.pi)))
        cfg = symmetric_config(T, a.U, a.x, rho=(0.0, r, r), eps=a.eps, quad_tol=a.tol, threads=a.threads)
    shift_sum_index(cfg)
    rep = run_equal_areas(cfg)
    d = rep.to_dict()
    keep = ("i_plus", "i_minus", "cancellation_ratio", "additivity_gap_g5", "additivity_gap_g6",
            "additivity_tol", "lower_bound", "bound_plus_ok", "bound_minus_ok")
    return cfg.to_dict(), [d], [{k: d[k] for k in keep}], None


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write results to this path in --format")
    common.add_argument("--manifest", help="write the full run manifest (JSON) here")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--deg", action="store_true", help="angles are given in degrees")
    common.add_argument("--eps", type=float, default=0.01)
    common.add_argument("--tol", type=float, default=1e-6, help="absolute quadrature tolerance")

    p = Parser(prog="zladder", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"zladder {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    s = sub.add_parser("z", parents=[common], help="Hardy Z with error bound")
    s.add_argument("--t", required=True, help="one or more comma-separated t values")
    s.set_defaults(func=cmd_z)

    s = sub.add_parser("nodes", parents=[common], help="nodes k_nu(tau)")
    s.add_argument("--nu", default="1", help="index or range a:b")
    s.add_argument("--tau", type=float, default=0.0)
    s.add_argument("--T", type=float)
    s.add_argument("--U", type=float)
    s.add_argument("--parity", choices=("even", "odd"), default="even")
    s.set_defaults(func=cmd_nodes)

    s = sub.add_parser("sets", parents=[common], help="G5 / G6 interval lists")
    s.add_argument("--family", type=str.upper, choices=("G5", "G6"), default="G5")
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--U", type=float, required=True)
    s.add_argument("--x1", type=float, default=-math.pi / 2)
    s.add_argument("--x2", type=float, default=math.pi / 2)
    s.add_argument("--plot", help="path prefix for .dat/.svg of the set and its ladder image")
    s.set_defaults(func=cmd_sets)

    s = sub.add_parser("ladder", parents=[common], help="ladder disjointness report")
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--U", type=float, required=True)
    s.set_defaults(func=cmd_ladder)

    def experiment(name, func, help_):
        e = sub.add_parser(name, parents=[common], help=help_)
        e.add_argument("--T", required=True)
        e.add_argument("--U", type=float, required=True)
        e.set_defaults(func=func)
        return e

    s = experiment("correlate", cmd_correlate, "G5 and G6 correlation integrals")
    for flag, default in (("x1", -math.pi / 2), ("x2", math.pi / 2), ("y1", None), ("y2", None)):
        s.add_argument(f"--{flag}", type=float, default=default)
    s.add_argument("--rho", type=_rho, default=(0.0, 0.0, 0.0))
    s.add_argument("--plot", help="path prefix for rel_dev vs T .dat/.svg")

    s = experiment("splitting", cmd_splitting, "rho1 = 0, rho2 = rho3 = rho_k(z)")
    for flag, default in (("x1", -math.pi / 2), ("x2", math.pi / 2), ("y1", None), ("y2", None)):
        s.add_argument(f"--{flag}", type=float, default=default)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--z", type=float, default=0.0)
    s.add_argument("--four-way", action="store_true", help="run z = 0 and z = pi")
    s.set_defaults(rho=(0.0, 0.0, 0.0))

    s = experiment("cubic", cmd_cubic, "Z^3 over G5(-x, x) and G6(-y, y)")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--y", type=float)

    s = experiment("areas", cmd_areas, "sign-partitioned equal-areas run")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--rho", type=_rho)
    return p


def _to_radians(a) -> None:
    for name in ANGLE_FLAGS:
        v = getattr(a, name, None)
        if isinstance(v, float):
            setattr(a, name, math.radians(v))


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    try:
        a = build_parser().parse_args(argv)
        if a.deg:
            _to_radians(a)
        for name in ("y1", "y2"):
            if hasattr(a, name) and getattr(a, name) is None:
                setattr(a, name, getattr(a, "x" + name[1]))
        cfg, reports, rows, text = a.func(a)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    except (ConvergenceError, ArithmeticError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    reports = [r if "config" in r else {**r, "config": cfg} for r in reports]
    doc = manifest(a.command, argv, cfg, reports, started)
    if text is None:
        text = to_table(rows)
    rendered = {"json": lambda: dumps(doc), "csv": lambda: to_csv(rows, cfg), "text": lambda: text}
    try:
        if a.out:
            Path(a.out).write_text(rendered[a.format]())
            sys.stdout.write(text)
        else:
            sys.stdout.write(rendered[a.format]())
        if a.manifest:
            Path(a.manifest).write_text(dumps(doc))
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
