"""Command-line entry point.

Exit codes: 0 on success, 1 on configuration errors, 2 on numerical failures.
"""

import argparse
import sys

from . import figures, runner
from .config import apply_overrides, load_scenario, parse_lines, parse_override
from .errors import ConfigError, PhaseCovError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="phasecov",
        description="Speed limits and non-Markovianity for phase-covariant qubit channels.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    common.add_argument("--seed", type=int, default=None, help="seed for optimizer restarts")
    common.add_argument("--points", type=int, default=None, help="grid resolution")
    common.add_argument("--jobs", type=int, default=None, help="worker processes")
    common.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                        help="replace a parameter (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)
    fig = sub.add_parser("figure", parents=[common], help="reproduce a figure's data")
    fig.add_argument("id", help=f"one of {', '.join(figures.FIGURE_IDS)}")
    for name, text in (("run", "evolve a scenario over its time grid"),
                       ("zeta", "SSS measure over a grid of horizons"),
                       ("action", "optimize the action of a control path")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("config", help="scenario file")
    return parser


def _check_flags(args):
    if args.seed is not None and args.seed < 0:
        raise ConfigError("--seed must be non-negative")
    if args.points is not None and args.points < 2:
        raise ConfigError("--points must be >= 2")
    if args.jobs is not None and args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")


def _flag_overrides(args):
    extra = []
    if args.seed is not None:
        extra.append(f"run.seed={args.seed}")
    if args.points is not None:
        key = "action.steps" if args.command == "action" else "grid.points"
        extra.append(f"{key}={args.points}")
    if args.jobs is not None:
        extra.append(f"run.jobs={args.jobs}")
    return args.override + extra


def _run_figure(args):
    overrides = dict(parse_override(item) for item in args.override)
    header, rows = figures.run_figure(args.id, overrides, seed=args.seed or 0,
                                      points=args.points, jobs=args.jobs or 1)
    runner.write_csv(args.out, header, rows)


def _run_config(args):
    with open(args.config, encoding="utf-8") as fh:
        entries = parse_lines(fh.read())
    if args.command == "run" and "figure" in entries:
        # a config may just name a preset and adjust its parameters
        fid, _ = entries.pop("figure")
        merged = {k: v for k, (v, _) in apply_overrides(entries, args.override).items()}
        header, rows = figures.run_figure(fid, merged, seed=args.seed or 0, points=args.points,
                                          jobs=args.jobs or 1)
        runner.write_csv(args.out, header, rows)
        return
    s = load_scenario(args.config, _flag_overrides(args),
                      require_channel=args.command != "action")
    out = args.out if args.out is not None else s.out
    if args.command == "run":
        runner.run_scenario(s, out)
    elif args.command == "zeta":
        runner.run_zeta(s, out)
    else:
        runner.run_action(s, out)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _check_flags(args)
        if args.command == "figure":
            _run_figure(args)
        else:
            _run_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PhaseCovError, ArithmeticError, AssertionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        # invalid parameter values surface as ValueError from the constructors
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
