"""Command-line entry point.

Subcommands:
  le-run   --config file.json [--seed N] [--out DIR]   run any experiment
  spectrum --config file.json [--seed N] [--out DIR]   spectrum analysis
  check    --suite {reductions,otoc-renyi,protocol,duality|all} [--seed N]

Exit codes: 0 success, 2 invalid config, 3 numerical failure.
Thread count for disorder realizations comes from the LECHO_THREADS env var.
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import (
    ConfigError,
    ExperimentConfig,
    config_from_dict,
    load_config,
    run_experiment,
)
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _apply_overrides(config: ExperimentConfig, args) -> ExperimentConfig:
    raw = config.to_dict()
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.out is not None:
        raw["output_dir"] = args.out
    return config_from_dict(raw)


def _run_config(args, force_experiment: str | None = None) -> int:
    try:
        config = load_config(args.config)
        if force_experiment is not None and config.experiment != force_experiment:
            raise ConfigError(f"this subcommand runs the {force_experiment!r} experiment, "
                              f"config says {config.experiment!r}")
        config = _apply_overrides(config, args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        artifacts = run_experiment(config)
    except (FloatingPointError, ValueError, AssertionError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for name, path in sorted(artifacts.items()):
        print(f"{name}: {path}")
    return EXIT_OK


def _run_check(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    worst = EXIT_OK
    for name in names:
        try:
            result = run_suite(name, seed=args.seed)
        except (ValueError, ArithmeticError) as exc:
            print(f"[FAIL] {name}: {exc}")
            worst = EXIT_NUMERICAL
            continue
        print(result.summary())
        if not result.passed:
            worst = EXIT_NUMERICAL
    return worst


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lecho",
                                     description="Loschmidt echo / OTOC experiments "
                                                 "for dissipative quantum models")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("le-run", help="run an experiment from a JSON config")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--out", default=None)

    spectrum_p = sub.add_parser("spectrum",
                                help="run the spectrum experiment from a JSON config")
    spectrum_p.add_argument("--config", required=True)
    spectrum_p.add_argument("--seed", type=int, default=None)
    spectrum_p.add_argument("--out", default=None)

    check_p = sub.add_parser("check", help="run an exact-identity suite")
    check_p.add_argument("--suite", required=True, choices=[*SUITES, "all"])
    check_p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "le-run":
        return _run_config(args)
    if args.command == "spectrum":
        return _run_config(args, force_experiment="spectrum")
    if args.command == "check":
        return _run_check(args)
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
