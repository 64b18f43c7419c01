"""Command-line front end.

Subcommands::

    tiedecay run <config.json> [--seed N] [--out DIR] [--workers K]
    tiedecay validate <config.json>
    tiedecay list-experiments

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, NumericalError
from .experiments import EXPERIMENTS, ExperimentConfig, run, validate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiedecay",
        description="Run reproducible tie-decay network experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment config")
    p_run.add_argument("config", type=Path)
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--out", type=Path, default=Path("results"))
    p_run.add_argument("--workers", type=int, default=1)

    p_val = sub.add_parser("validate", help="check a config without running it")
    p_val.add_argument("config", type=Path)

    sub.add_parser("list-experiments", help="list experiment ids")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list-experiments":
        for name in sorted(EXPERIMENTS):
            print(f"{name:16s} {EXPERIMENTS[name][2]}")
        return EXIT_OK

    try:
        config = ExperimentConfig.load(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        violations = validate(config)
        if violations:
            print(f"{len(violations)} violation(s):")
            for item in violations:
                print(f"  - {item}")
        else:
            print("ok")
        return EXIT_OK

    if args.seed is not None:
        config = replace(config, seed=args.seed)
    try:
        path = run(config, args.out, workers=max(1, args.workers))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(path)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
