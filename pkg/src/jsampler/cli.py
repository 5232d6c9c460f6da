"""Command-line entry point: one subcommand per experiment family.

    jsampler <subcommand> --config file.json [--seed INT] [--out DIR]
                          [--format csv|json] [--threads INT]

Exit codes: 0 ok, 2 config error, 3 internal consistency error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import experiments
from .experiments import ConfigError
from .validation import ConsistencyError

_RUNNERS = {
    "fidelity": ("fidelity", experiments.run_fidelity_sweep),
    "sampling": ("sampling", experiments.run_sampling_experiment),
    "entanglement": ("entanglement", experiments.run_entanglement_sweep),
    "otoc": ("otoc", experiments.run_otoc_sweep),
    "pt-hist": ("pt-hist", experiments.run_pt_histogram),
    "haar-oracle": ("haar-oracle", experiments.run_haar_oracle),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jsampler",
        description="Simulate chain-sampler circuits and reproduce their "
        "fidelity, sampling, entanglement and scrambling metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        cmd = sub.add_parser(name, help=f"run the {name} experiment")
        cmd.add_argument("--config", required=True, help="JSON experiment config")
        cmd.add_argument("--seed", type=int, default=None, help="override master_seed")
        cmd.add_argument("--out", default=".", help="output directory")
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        cmd.add_argument("--threads", type=int, default=1)
    return parser


def _stem(command: str) -> str:
    return command.replace("-", "_")


def run(args) -> list:
    """Execute one subcommand; returns the list of files written."""
    config = experiments.load_config(args.config)
    expected, runner = _RUNNERS[args.command]
    if config.experiment != expected:
        raise ConfigError(
            f"experiment: config is for {config.experiment!r}, "
            f"but the {args.command!r} subcommand was invoked"
        )
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"seed: must be >= 0, got {args.seed}")
        config = dataclasses.replace(config, master_seed=args.seed)
    if args.threads < 1:
        raise ConfigError(f"threads: must be >= 1, got {args.threads}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = _stem(args.command)
    written = []

    result = runner(config, threads=args.threads)
    if args.command == "sampling":
        tables = {f"{stem}_summary": result[0], f"{stem}_distributions": result[1]}
    elif args.command == "pt-hist":
        tables = {f"{stem}_bins": result[0], f"{stem}_summary": result[1]}
    else:
        tables = {stem: result}
    for name, rows in tables.items():
        path = out_dir / f"{name}.{args.format}"
        experiments.write_rows(rows, path, args.format)
        written.append(path)
    sidecar = out_dir / f"{stem}_config.json"
    experiments.write_config_sidecar(config, sidecar)
    written.append(sidecar)
    return written


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written = run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
