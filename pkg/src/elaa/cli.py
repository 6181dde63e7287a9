"""Command-line entry point: one subcommand per experiment.

Usage: ``elaa <experiment> [--config cfg.json] [--out DIR] [--threads K]
[--tolerance T]``. The thread count may also be set with the ``ELAA_THREADS``
environment variable (the flag wins). Exit status is 0 only when the run and
all of its embedded sanity checks succeed.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from elaa.exceptions import ConfigError, ElaaError
from elaa.experiments import EXPERIMENTS, run_experiment, validate_config


def _default_threads():
    raw = os.environ.get("ELAA_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError([f"ELAA_THREADS: expected an integer, got {raw!r}"])
    if value < 1:
        raise ConfigError([f"ELAA_THREADS: must be >= 1, got {value}"])
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elaa",
        description=(
            "Near-field channel-gain, field-region, beam-depth, and "
            "depth-multiplexing experiments for planar apertures; each "
            "subcommand writes a CSV (or JSON) plus a .meta.json sidecar."
        ),
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", default=None, help="JSON config file (empty = defaults)")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker threads for per-antenna integrals (default: ELAA_THREADS or 1)",
        )
        p.add_argument(
            "--tolerance",
            type=float,
            default=None,
            help="override the quadrature relative tolerance",
        )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads = args.threads if args.threads is not None else _default_threads()
        if threads < 1:
            raise ConfigError([f"--threads: must be >= 1, got {threads}"])
        config = validate_config(args.config, experiment=args.experiment)
        if args.tolerance is not None:
            if not 0 < args.tolerance < 1:
                raise ConfigError([f"--tolerance: must lie in (0, 1), got {args.tolerance}"])
            config = dataclasses.replace(config, quadrature_rtol=args.tolerance)
        summary = run_experiment(config, out_dir=args.out, threads=threads)
    except ConfigError as exc:
        print("configuration error:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return 2
    except ElaaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in summary["files"]:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
