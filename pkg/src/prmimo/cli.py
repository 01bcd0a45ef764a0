"""Command line entry points.

Exit codes: 0 success, 2 configuration error, 3 numerical degeneracy in all
trials (or a failed selftest).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .channel import generate_realization
from .exceptions import ConfigError
from .gain_allocation import single_pattern_design
from .harness import (
    SCHEME_EOGA,
    SCHEME_SOF_EVD,
    SCHEME_SOF_MO,
    SWEEP_RAY,
    SWEEP_SNR,
    all_cells_degenerate,
    array_factor_scan,
    export_pattern_samples,
    load_experiment_config,
    run_experiment,
    run_selftest,
    write_array_factor_csv,
    write_rate_csv,
)
from .sequential import SOLVER_EVD, SOLVER_MANIFOLD, sequential_design

_EXIT_OK = 0
_EXIT_CONFIG = 2
_EXIT_DEGENERATE = 3


def _add_sweep_flags(sub):
    sub.add_argument("--config", required=True, help="JSON experiment config")
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--seed", type=int, default=None, help="override base_seed")
    sub.add_argument("--trials", type=int, default=None, help="override n_trials")
    sub.add_argument("--threads", type=int, default=1, help="worker processes")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="prmimo",
        description="Pattern-reconfigurable MIMO rate experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rate = sub.add_parser("rate-sweep", help="mean rate vs SNR, CSV output")
    _add_sweep_flags(rate)

    ray = sub.add_parser("ray-sweep", help="mean rate vs rays per cluster, CSV output")
    _add_sweep_flags(ray)

    pat = sub.add_parser("pattern-export", help="export a designed pattern matrix")
    pat.add_argument("--config", required=True, help="JSON experiment config")
    pat.add_argument("--out", required=True, help="pattern samples CSV path")
    pat.add_argument("--seed", type=int, default=None, help="override base_seed")
    pat.add_argument(
        "--scheme",
        default=SCHEME_EOGA,
        choices=[SCHEME_EOGA, SCHEME_SOF_MO, SCHEME_SOF_EVD],
        help="which design to export",
    )
    pat.add_argument(
        "--array-factor-out",
        default=None,
        help="also write an array factor scan CSV",
    )

    self_p = sub.add_parser("selftest", help="invariant checks plus golden CSVs")
    self_p.add_argument("--out", default="selftest_out", help="output directory")
    self_p.add_argument("--seed", type=int, default=7)
    return parser


def _override(cfg, seed, trials):
    if seed is not None:
        if seed < 0:
            raise ConfigError("--seed must be nonnegative")
        cfg = dataclasses.replace(cfg, base_seed=seed)
    if trials is not None:
        if trials < 1:
            raise ConfigError("--trials must be positive")
        cfg = dataclasses.replace(cfg, n_trials=trials)
    return cfg


def _run_sweep(args, expected_kind):
    cfg = load_experiment_config(args.config)
    if cfg.sweep.kind != expected_kind:
        raise ConfigError(
            f"{args.command} requires a {expected_kind!r} sweep, config has {cfg.sweep.kind!r}"
        )
    if args.threads < 1:
        raise ConfigError("--threads must be positive")
    cfg = _override(cfg, args.seed, args.trials)
    rows = run_experiment(cfg, threads=args.threads)
    if all_cells_degenerate(rows):
        print("all trials degenerate; no CSV written", file=sys.stderr)
        return _EXIT_DEGENERATE
    write_rate_csv(rows, args.out)
    return _EXIT_OK


def _run_pattern_export(args):
    cfg = load_experiment_config(args.config)
    cfg = _override(cfg, args.seed, None)
    realization = generate_realization(cfg.channel, cfg.base_seed)
    if args.scheme == SCHEME_EOGA:
        pattern, _ = single_pattern_design(
            realization, normalization=cfg.normalization_mode
        )
    else:
        solver = SOLVER_MANIFOLD if args.scheme == SCHEME_SOF_MO else SOLVER_EVD
        pattern = sequential_design(
            realization, solver=solver, normalization=cfg.normalization_mode
        ).pattern
    export_pattern_samples(realization, pattern, args.out)
    if args.array_factor_out is not None:
        grid = np.linspace(-np.pi / 2, np.pi / 2, 181)
        scan = array_factor_scan(realization, pattern, grid)
        write_array_factor_csv(scan, args.array_factor_out)
    return _EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("rate-sweep", "ray-sweep"):
            kind = SWEEP_SNR if args.command == "rate-sweep" else SWEEP_RAY
            return _run_sweep(args, kind)
        if args.command == "pattern-export":
            return _run_pattern_export(args)
        if args.command == "selftest":
            if args.seed < 0:
                raise ConfigError("--seed must be nonnegative")
            ok, messages = run_selftest(args.out, seed=args.seed)
            for line in messages:
                print(line)
            return _EXIT_OK if ok else _EXIT_DEGENERATE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
