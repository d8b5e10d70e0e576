"""Command line entry point: `coopbeam run` and `coopbeam validate`."""

from __future__ import annotations

import argparse
import logging
import sys

from .channel import ConfigurationError
from .harness import ARCHITECTURES, SWEEP_PARAMS, load_config, run_sweep, \
    validate_config, write_csv


def build_parser():
    p = argparse.ArgumentParser(prog="coopbeam",
                                description="Cooperative mmWave hybrid "
                                            "beamforming Monte Carlo simulator")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a Monte Carlo sweep")
    run.add_argument("--config", required=True, help="JSON configuration path")
    run.add_argument("--seed", type=int, default=0, help="master seed")
    run.add_argument("--trials", type=int, default=None,
                     help="trials per (architecture, value)")
    run.add_argument("--arch", default="fd,fc,fs,ds",
                     help="comma-separated subset of fd,fc,fs,ds")
    run.add_argument("--sweep", choices=SWEEP_PARAMS, default=None,
                     help="override the swept parameter from the config")
    run.add_argument("--jobs", type=int, default=1, help="parallel workers")
    run.add_argument("--out", required=True, help="output CSV path")

    val = sub.add_parser("validate", help="check a configuration file")
    val.add_argument("--config", required=True)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            validate_config(args.config)
            print("configuration OK")
            return 0
        cfg = load_config(args.config)
        cfg.master_seed = args.seed
        if args.trials is not None:
            cfg.trials = args.trials
        if args.sweep is not None:
            cfg.sweep_name = args.sweep
        archs = tuple(a.strip().lower() for a in args.arch.split(",") if a.strip())
        bad = [a for a in archs if a not in ARCHITECTURES]
        if bad:
            raise ConfigurationError(f"unknown architectures: {bad}")
        cfg.archs = archs
        results = run_sweep(cfg, n_jobs=args.jobs)
        write_csv(results, args.out)
        print(f"wrote {len(results)} rows to {args.out}")
        return 0
    except (ConfigurationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
