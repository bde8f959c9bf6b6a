"""Command-line entry point: ``optosqueeze {derive,evolve,oracle,thermal,figures}``.

Exit codes: 0 success, 2 parse/validation error, 3 regime or scale refusal,
4 numerical failure (non-convergence or a failed oracle comparison).
"""
import argparse
import logging
import os
import sys

from . import reports
from .config import FORMATS, load_config
from .errors import (
    ConvergenceError,
    DegenerateCoupling,
    ImpureState,
    NotConverged,
    ParseError,
    RegimeError,
    StepSizeError,
    ToyScaleError,
    ValidationError,
)

log = logging.getLogger("optosqueeze")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PHYSICS = 3
EXIT_NUMERICAL = 4


def _write(out_dir, name, fmt, text):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{name}.{fmt}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def cmd_derive(cfg, args):
    pairs = reports.derive_report(cfg)
    path = _write(args.out, "derive", args.format, reports.render_pairs(pairs, args.format))
    for k, v in pairs:
        print(f"{k:24s} {reports._num(v)}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_evolve(cfg, args):
    columns, rows = reports.evolve_trace(cfg)
    path = _write(args.out, "evolve", args.format, reports.render_table(columns, rows, args.format))
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_oracle(cfg, args):
    summary, (columns, rows), rep = reports.oracle_report(cfg)
    _write(args.out, "oracle_residuals", args.format, reports.render_table(columns, rows, args.format))
    path = _write(args.out, "oracle", args.format, reports.render_pairs(summary, args.format))
    for k, v in summary:
        print(f"{k:32s} {reports._num(v)}")
    print(f"wrote {path}")
    return EXIT_OK if rep.passed else EXIT_NUMERICAL


def cmd_thermal(cfg, args):
    pairs = reports.thermal_report(cfg, seed=args.seed)
    path = _write(args.out, "thermal", args.format, reports.render_pairs(pairs, args.format))
    for k, v in pairs:
        print(f"{k:34s} {reports._num(v)}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_figures(cfg, args):
    for name, (columns, rows) in reports.figure_tables(cfg).items():
        path = _write(args.out, name, args.format, reports.render_table(columns, rows, args.format))
        print(f"wrote {path}")
    return EXIT_OK


COMMANDS = {
    "derive": (cmd_derive, "tabulate base rates, couplings and regime"),
    "evolve": (cmd_evolve, "closed-form vacuum trajectory (|nu|, |kappa|, covariance)"),
    "oracle": (cmd_oracle, "compare the closed forms with truncated Fock-space evolution"),
    "thermal": (cmd_thermal, "stationary thermal squeezing and optional Monte-Carlo check"),
    "figures": (cmd_figures, "data files for the displacement and squeezing figures"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="optosqueeze", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="config file (or a shipped name: fig2.cfg, toy.cfg)")
        p.add_argument("--out", default=None, help="output directory (default: out_dir from the config)")
        p.add_argument("--format", choices=FORMATS, default=None, help="output format (default: from the config)")
        p.add_argument("--seed", type=int, default=None, help="override the Monte-Carlo seed")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
    except (ParseError, ValidationError) as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_INPUT
    args.out = args.out or cfg.out_dir
    args.format = args.format or cfg.format

    func = COMMANDS[args.command][0]
    try:
        return func(cfg, args)
    except (ValidationError, StepSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RegimeError, ToyScaleError, DegenerateCoupling) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except (ConvergenceError, NotConverged, ImpureState) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
