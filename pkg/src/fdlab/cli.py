"""Command-line entry point.

Subcommands: decay, dqc1, decohere, converge. Each loads an optional config
file and applies flag overrides, runs the campaign, and writes CSV or JSON.
Exit codes: 0 success, 1 validation error, 2 I/O error. Worker parallelism
is capped by the FDLAB_THREADS environment variable.
"""
from __future__ import annotations

import argparse
import sys

from .harness import ConfigError, ExperimentConfig, parse_config_text, \
    run_experiment, write_records


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key = value config file")
    sub.add_argument("--qubits", type=int)
    sub.add_argument("--steps", type=int)
    sub.add_argument("--iterations", type=int, help="pseudo-random map depth")
    sub.add_argument("--delta", type=float, help="perturbation strength (rad)")
    sub.add_argument("--axis", choices=("x", "y", "z"))
    sub.add_argument("--ensemble", type=int, help="number of maps / samples")
    sub.add_argument("--seed", type=int, dest="master_seed")
    sub.add_argument("--shots", type=int, help="0 = exact readout")
    sub.add_argument("--epsilon", type=float, help="probe polarization")
    sub.add_argument("--output", help="output file path")
    sub.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdlab",
                                     description="Fidelity-decay laboratory campaigns")
    subs = parser.add_subparsers(dest="experiment", required=True)
    for name, desc in (("decay", "average fidelity decay over a map ensemble"),
                       ("dqc1", "fidelity decay read out through the one-clean-qubit circuit"),
                       ("decohere", "engineered-environment decoherence rate scan"),
                       ("converge", "pseudo-random ensemble trace-moment convergence")):
        _add_common_flags(subs.add_parser(name, help=desc))
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {key: getattr(args, key) for key in
                 ("qubits", "steps", "iterations", "delta", "axis", "ensemble",
                  "master_seed", "shots", "epsilon", "output", "format")}
    values = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            values = parse_config_text(fh.read())
        if values.get("experiment", args.experiment) != args.experiment:
            raise ConfigError(
                f"config file says experiment={values['experiment']!r} "
                f"but the {args.experiment!r} subcommand was invoked")
    values.update({k: v for k, v in overrides.items() if v is not None})
    values["experiment"] = args.experiment
    return ExperimentConfig(**values).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        records = run_experiment(cfg)
        out_path = cfg.output or f"{cfg.experiment}.{cfg.format}"
        write_records(records, out_path, cfg.format)
    except ConfigError as exc:
        print(f"fdlab: config error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"fdlab: validation error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"fdlab: I/O error: {exc}", file=sys.stderr)
        return 2
    print(f"{cfg.experiment}: wrote {len(records)} records to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
