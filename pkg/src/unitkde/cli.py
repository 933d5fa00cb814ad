"""Command-line interface.

Subcommands: `fit` evaluates a fitted density on a grid, `bandwidth`
reports the reference-rule selection as JSON, `simulate` runs the Monte
Carlo experiment from a TOML config, `realdata` runs the cross-validation
study on CSV columns, and `plotdata` aggregates a results CSV into
mean/sd series. Data goes to the requested output (stdout by default);
diagnostics go to stderr. Exit codes: 0 success, 1 runtime failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from contextlib import contextmanager
from typing import Optional, Sequence

import numpy as np

from . import harness
from .bandwidth import select_bandwidth
from .errors import ConfigurationError, UnitKdeError
from .harness import LoadReport, PLOT_METRICS, PRACTICAL_METHODS
from .kernels import evaluate, normalize
from .quadrature import make_rule

SEED_ENV_VAR = "UNITKDE_SEED"
_DEFAULT_ROOT_SEED = 20260814


def _resolve_seed(cli_value: Optional[int]) -> Optional[int]:
    """CLI flag beats the environment variable beats nothing."""
    if cli_value is not None:
        return int(cli_value)
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(
            f"{SEED_ENV_VAR} must be an integer, got {raw!r}"
        ) from None


def _note_ingest(column: str, report: LoadReport) -> None:
    print(
        f"{column}: {report.sample.n} values read "
        f"({report.n_missing} missing dropped, {report.n_clamped} clamped)",
        file=sys.stderr,
    )


@contextmanager
def _open_output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_rows(path: Optional[str], header: Sequence[str], rows) -> None:
    with _open_output(path) as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def _cmd_fit(args) -> None:
    report = harness.load_column(args.input, args.column, args.clip_policy)
    _note_ingest(args.column, report)
    rule = make_rule(*_quad_pair(args))
    cfg = harness.RealDataConfig(
        kurtosis_mode=args.kurtosis_mode, clip_epsilon=args.clip_epsilon
    )
    model, selection, _ = harness.run_method(
        args.method, report.sample, None, cfg, rule
    )
    if args.normalize:
        model = normalize(model, rule)
    grid = (np.arange(args.grid) + 0.5) / args.grid
    density = evaluate(model, grid)
    print(
        f"{args.method}: h = {selection.h:.6g}"
        + (" (fallback)" if selection.used_fallback else ""),
        file=sys.stderr,
    )
    _write_rows(
        args.output,
        ("x", "density"),
        ([repr(float(x)), repr(float(d))] for x, d in zip(grid, density)),
    )


def _cmd_bandwidth(args) -> None:
    report = harness.load_column(args.input, args.column, args.clip_policy)
    _note_ingest(args.column, report)
    selection = select_bandwidth(report.sample, kurtosis_mode=args.kurtosis_mode)
    payload = {
        "h": selection.h,
        "method": selection.method,
        "used_fallback": selection.used_fallback,
        "a_hat": selection.params.a if selection.params is not None else None,
        "b_hat": selection.params.b if selection.params is not None else None,
        "scaling_constant": selection.scaling_constant,
    }
    with _open_output(args.output) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _cmd_simulate(args) -> None:
    cfg = harness.load_config(
        args.config,
        seed_override=_resolve_seed(args.seed),
        output_override=args.output,
    )
    if cfg.output_path is None:
        raise ConfigurationError(
            "no output path: set 'output' in the config or pass --output"
        )
    records = harness.run_experiment1(cfg)
    print(f"wrote {len(records)} trial records to {cfg.output_path}", file=sys.stderr)


def _cmd_realdata(args) -> None:
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    if not columns:
        raise ConfigurationError("--columns must name at least one column")
    labeled = []
    for column in columns:
        report = harness.load_column(args.input, column, args.clip_policy)
        _note_ingest(column, report)
        labeled.append((column, report.sample))
    os.makedirs(args.output_dir, exist_ok=True)
    seed = _resolve_seed(args.seed)
    cfg = harness.RealDataConfig(
        root_seed=_DEFAULT_ROOT_SEED if seed is None else seed,
        reps=args.reps,
        kfold_k=args.kfold,
        kurtosis_mode=args.kurtosis_mode,
        summary_path=os.path.join(args.output_dir, "exp2_summary.csv"),
        folds_path=os.path.join(args.output_dir, "exp2_folds.csv"),
    )
    summary_rows, fold_rows = harness.run_experiment2(labeled, cfg)
    print(
        f"wrote {len(summary_rows)} summary rows to {cfg.summary_path} and "
        f"{len(fold_rows)} fold rows to {cfg.folds_path}",
        file=sys.stderr,
    )


def _cmd_plotdata(args) -> None:
    rows = harness.aggregate_plot_data(args.input, args.metric)
    header = ("distribution", "method", "n", "mean", "sd", "count")
    _write_rows(
        args.output,
        header,
        (
            [
                r["distribution"],
                r["method"],
                str(r["n"]),
                repr(float(r["mean"])),
                "" if r["sd"] is None else repr(float(r["sd"])),
                str(r["count"]),
            ]
            for r in rows
        ),
    )


def _quad_pair(args):
    return args.quad_panels, args.quad_order


def _add_io_options(sub, with_method: bool) -> None:
    sub.add_argument("--input", required=True, help="input CSV (header row required)")
    sub.add_argument("--column", required=True, help="column to read")
    sub.add_argument(
        "--clip-policy",
        choices=("reject", "clamp"),
        default="reject",
        help="handling of values outside [0,1] (default: reject)",
    )
    sub.add_argument(
        "--kurtosis-mode",
        choices=("standard", "paper_printed"),
        default="standard",
        help="excess-kurtosis formula used by the fallback heuristic",
    )
    if with_method:
        sub.add_argument(
            "--method",
            choices=PRACTICAL_METHODS,
            default="beta-ref",
            help="density estimation method (default: beta-ref)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitkde",
        description="Kernel density estimation on the unit interval.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    fit = subparsers.add_parser("fit", help="fit a density and evaluate it on a grid")
    _add_io_options(fit, with_method=True)
    fit.add_argument("--grid", type=int, default=512, help="number of grid points")
    fit.add_argument(
        "--normalize",
        action="store_true",
        help="rescale the estimate to integrate to 1",
    )
    fit.add_argument(
        "--clip-epsilon",
        type=float,
        default=1e-6,
        help="interior clipping used by the logit-transform family",
    )
    fit.add_argument("--quad-panels", type=int, default=16)
    fit.add_argument("--quad-order", type=int, default=32)
    fit.add_argument("--output", default="-", help="output CSV path, '-' for stdout")
    fit.set_defaults(func=_cmd_fit)

    bandwidth = subparsers.add_parser(
        "bandwidth", help="reference-rule bandwidth selection as JSON"
    )
    _add_io_options(bandwidth, with_method=False)
    bandwidth.add_argument("--output", default="-", help="output path, '-' for stdout")
    bandwidth.set_defaults(func=_cmd_bandwidth)

    simulate = subparsers.add_parser(
        "simulate", help="run the Monte Carlo experiment from a TOML config"
    )
    simulate.add_argument("--config", required=True, help="TOML experiment config")
    simulate.add_argument("--output", default=None, help="override the config's output path")
    simulate.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"override the root seed (also {SEED_ENV_VAR})",
    )
    simulate.set_defaults(func=_cmd_simulate)

    realdata = subparsers.add_parser(
        "realdata", help="cross-validation study on real data columns"
    )
    realdata.add_argument("--input", required=True, help="input CSV")
    realdata.add_argument(
        "--columns", required=True, help="comma-separated column names"
    )
    realdata.add_argument("--output-dir", default=".", help="directory for output CSVs")
    realdata.add_argument(
        "--clip-policy", choices=("reject", "clamp"), default="reject"
    )
    realdata.add_argument(
        "--kurtosis-mode", choices=("standard", "paper_printed"), default="standard"
    )
    realdata.add_argument("--reps", type=int, default=10, help="CV repetitions")
    realdata.add_argument("--kfold", type=int, default=10, help="folds per repetition")
    realdata.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"root seed for fold shuffles (also {SEED_ENV_VAR})",
    )
    realdata.set_defaults(func=_cmd_realdata)

    plotdata = subparsers.add_parser(
        "plotdata", help="aggregate a results CSV into mean/sd series"
    )
    plotdata.add_argument("--input", required=True, help="Experiment-1 results CSV")
    plotdata.add_argument(
        "--metric", required=True, choices=sorted(PLOT_METRICS), help="metric to aggregate"
    )
    plotdata.add_argument("--output", default="-", help="output CSV path, '-' for stdout")
    plotdata.set_defaults(func=_cmd_plotdata)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (UnitKdeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
