"""Command-line front end.

    posfreq figure {1,2,3,4,5} [--b ...] [--t ...] [--out FILE]
    posfreq verify {fast,full} [--tol NAME=VALUE ...] [--out FILE]

Exit status: 0 success, 1 a verification check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from . import figures
from .spectral_oracle import DEFAULT_EPS_SCHEDULE, SpectralConfig
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _override(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name, float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"tolerance must be a number, got {value!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posfreq",
        description="Positive-frequency wave packets: figure datasets and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="emit the dataset behind one figure")
    fig.add_argument("figure_id", type=int, choices=[1, 2, 3, 4, 5])
    fig.add_argument("--b", type=float, action="append", help="half-width (repeatable for figure 5)")
    fig.add_argument("--x0", type=float, default=0.0, help="source packet centre")
    fig.add_argument("--x1", type=float, default=2.0, help="detector packet centre (figures 4, 5)")
    fig.add_argument("--t", type=float, action="append", help="time (repeatable for figure 4)")
    fig.add_argument("--t-max", type=float, default=4.0, help="end of the time axis (figure 5)")
    fig.add_argument("--dt", type=float, default=0.01, help="time step (figure 5)")
    fig.add_argument("--grid-min", type=float)
    fig.add_argument("--grid-max", type=float)
    fig.add_argument("--grid-n", type=int)
    fig.add_argument("--out", default="-", help="output file, '-' for stdout")
    fig.add_argument("--format", choices=["dsv", "structured"], default="dsv")

    ver = sub.add_parser("verify", help="run the verification suite")
    ver.add_argument("suite", choices=["fast", "full"])
    ver.add_argument("--tol", type=_override, action="append", default=[], metavar="NAME=VALUE",
                     help="override a check tolerance; NAME '*' applies to all checks")
    ver.add_argument("--eps-schedule", type=_float_list, default=DEFAULT_EPS_SCHEDULE)
    ver.add_argument("--out", default="-")
    ver.add_argument("--format", choices=["dsv", "structured"], default="structured")
    return parser


def _figure_kwargs(args) -> dict:
    fid = args.figure_id
    grid = {}
    for key, value in (("grid_min", args.grid_min), ("grid_max", args.grid_max), ("grid_n", args.grid_n)):
        if value is not None:
            grid[key] = value
    if fid in (1, 2, 3):
        if args.t and len(args.t) > 1:
            raise ValueError(f"figure {fid} takes a single --t")
        if args.b and len(args.b) > 1:
            raise ValueError(f"figure {fid} takes a single --b")
        kw = {"x0": args.x0, **grid}
        if args.b:
            kw["b"] = args.b[0]
        if args.t:
            kw["t"] = args.t[0]
        return kw
    if fid == 4:
        if args.b and len(args.b) > 1:
            raise ValueError("figure 4 takes a single --b")
        kw = {"x0": args.x0, "x1": args.x1, **grid}
        if args.b:
            kw["b"] = args.b[0]
        if args.t:
            kw["times"] = tuple(args.t)
        return kw
    if grid or args.t:
        raise ValueError("figure 5 is a time series; use --t-max and --dt")
    kw = {"x0": args.x0, "x1": args.x1, "t_max": args.t_max, "dt": args.dt}
    if args.b:
        kw["widths"] = tuple(args.b)
    return kw


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            ds = figures.build_figure(args.figure_id, **_figure_kwargs(args))
            _write(ds.to_dsv() if args.format == "dsv" else ds.to_structured(), args.out)
            return EXIT_OK
        cfg = SpectralConfig(eps_schedule=args.eps_schedule)
        report = run_suite(args.suite, dict(args.tol), cfg)
    except ValueError as exc:
        print(f"posfreq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(report.to_structured() if args.format == "structured" else report.to_dsv(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
