"""Command-line entry point: run a registered experiment, emit a report.

    sqmlab <experiment> [--config FILE] [--out DIR] [--seed U64]
                        [--tol FLOAT] [--json | --csv] [experiment flags]

Reports are deterministic: a fixed seed and config produce a
byte-identical JSON file (sorted keys, complex numbers as [re, im],
cases sorted by case key).  The exit status is 0 iff every case
passed.  Config files are flat key=value lines; values parse as int,
float, bool, comma list, or string, and CLI flags override them.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .experiments import DEFAULTS, run_experiment


def _parse_scalar(text: str):
    text = text.strip()
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            continue
    return text


def parse_config(path: str | Path) -> dict:
    """Flat key=value config; '#' comments; commas make tuples."""
    params: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        value = value.strip()
        if "," in value:
            params[key.strip()] = tuple(
                _parse_scalar(v) for v in value.split(",") if v.strip()
            )
        else:
            params[key.strip()] = _parse_scalar(value)
    return params


def _jsonable(obj):
    """Canonical JSON form: complex -> [re, im], numpy -> python."""
    if isinstance(obj, complex):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def render_json(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def _csv_cell(x) -> str:
    if isinstance(x, complex):
        return f"{x.real!r}+{x.imag!r}j" if x.imag >= 0 else f"{x.real!r}{x.imag!r}j"
    return repr(x) if isinstance(x, float) else str(x)


def write_csv(report: dict, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["case", "value_re", "value_im", "oracle_re", "oracle_im",
             "abs_err", "rel_err", "tol", "pass"]
        )
        for case in report["cases"]:
            v, o = case["value"], case["oracle"]
            writer.writerow([
                case["case"],
                _csv_cell(v.real), _csv_cell(v.imag),
                _csv_cell(o.real), _csv_cell(o.imag),
                _csv_cell(case["abs_err"]), _csv_cell(case["rel_err"]),
                _csv_cell(case["tol"]), int(case["pass"]),
            ])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqmlab",
        description="Run a verification experiment and write its report.",
    )
    parser.add_argument("experiment", choices=sorted(DEFAULTS), metavar="experiment",
                        help=f"one of: {', '.join(sorted(DEFAULTS))}")
    parser.add_argument("--config", type=str, default=None,
                        help="flat key=value parameter file")
    parser.add_argument("--out", type=str, default="reports",
                        help="directory for report files (default: ./reports)")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed override (unsigned 64-bit)")
    parser.add_argument("--tol", type=float, default=None,
                        help="override the experiment's primary tolerance")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="write JSON report (default)")
    fmt.add_argument("--csv", action="store_true", help="write CSV case table instead")
    parser.add_argument("--process", type=str, default=None,
                        help="scattering process (smatrix: 2to2)")
    parser.add_argument("--order", type=int, default=None,
                        help="perturbative order (smatrix: 1 or 2)")
    parser.add_argument("--tau-sweep", action="store_true",
                        help="extend the slice-width halving sweep")
    parser.add_argument("--N", type=int, default=None,
                        help="number of time slices (fswap-cycle)")
    parser.add_argument("--M", type=int, default=None,
                        help="number of spatial sites (fswap-cycle)")
    return parser


def _collect_params(args: argparse.Namespace) -> dict:
    params: dict = {}
    if args.config:
        params.update(parse_config(args.config))
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        params["seed"] = args.seed
    if args.tol is not None:
        params["tol"] = args.tol
    if args.process is not None:
        params["process"] = args.process
    if args.order is not None:
        params["order"] = args.order
    if args.N is not None:
        params["N"] = args.N
    if args.M is not None:
        params["M"] = args.M
    if args.tau_sweep:
        base = int(params.get("sweep_points",
                              DEFAULTS[args.experiment].get("sweep_points", 3)))
        params["sweep_points"] = max(base, 5)
    return params


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        params = _collect_params(args)
        report = run_experiment(args.experiment, params)
    except (ValueError, KeyError, OSError) as exc:
        print(f"sqmlab: error: {exc}", file=sys.stderr)
        return 2

    report = {"schema": 1, "experiment": args.experiment, **report}
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for case in report["cases"]:
        mark = "pass" if case["pass"] else "FAIL"
        print(f"  [{mark}] {case['case']}  abs_err={case['abs_err']:.3e}")
    summary = report["summary"]

    if args.csv:
        path = out_dir / f"{args.experiment}.csv"
        write_csv(report, path)
    else:
        path = out_dir / f"{args.experiment}.json"
        path.write_text(render_json(report))
    print(
        f"{args.experiment}: {summary['cases']} cases, "
        f"{summary['failures']} failures, max_abs_err={summary['max_abs_err']:.3e} "
        f"-> {path}"
    )
    return 0 if summary["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
