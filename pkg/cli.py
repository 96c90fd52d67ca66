# cli.py
"""Command line front end.

    python cli.py simulate --out data/
    python cli.py ensemble --data data/measurements.csv --runs 30 --out results/
    python cli.py fit --config run.json --seed 7
    python cli.py validate --cases 100

Exit status: 0 success, 1 failed validation, 2 bad input or usage.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from kinetics.types import RATE_NAMES
from utils.config import read_config_file, run_config_from_dict
from utils.io import coefficients_frame, emit_results, save_measurements
from workflows.ensemble import run_ensemble
from workflows.fit import prepare_data, run_fit
from workflows.simulate import run_simulation
from workflows.validate import cmd_validate

logger = logging.getLogger("renal_aco")

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2

# flag dest -> AcoConfig field
_ACO_FLAGS = {
    "population": "population_size",
    "new_states": "new_states",
    "q": "q",
    "xi": "xi",
    "max_iter": "max_iter",
    "conv_tol": "conv_tol",
    "threshold": "threshold",
    "v_b": "v_b",
    "workers": "workers",
    "restarts": "restarts",
}

# flag dest -> RunConfig field
_RUN_FLAGS = {
    "data": "data",
    "out": "out",
    "seed": "seed",
    "runs": "runs",
    "noise_scale": "noise_scale",
    "blood_fraction": "blood_fraction",
    "cases": "validate_cases",
    "kidney_volume": "kidney_volume",
    "bladder_volume": "bladder_volume",
    "count_scale": "count_scale",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--seed", type=int, help="seed of the (first) run")
    common.add_argument("--runs", type=int, help="number of ensemble runs; replaces seeds from the config")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--data", type=Path, help="measurement CSV")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    aco = common.add_argument_group("ant colony")
    aco.add_argument("--preset", choices=["synthetic", "real_data"], help="AcoConfig preset")
    aco.add_argument("--population", type=int, help="population size P")
    aco.add_argument("--new-states", type=int, help="new states per iteration Q (default P // 2 + 1)")
    aco.add_argument("--q", type=float, help="rank weight spread")
    aco.add_argument("--xi", type=float, help="kernel width scale")
    aco.add_argument("--max-iter", type=int)
    aco.add_argument("--conv-tol", type=float, help="population diameter counted as converged")
    aco.add_argument("--threshold", type=float, help="reported rates below this are zeroed")
    aco.add_argument("--v-b", type=float, help="blood fraction of the kidney ROI")
    aco.add_argument("--lower-bound", type=float, help="lower bound of every rate")
    aco.add_argument("--upper-bound", type=float, help="upper bound of every rate")
    aco.add_argument("--restarts", type=int, help="collapses in a row without progress before a run stops")
    aco.add_argument("--shared-init", action="store_const", const=True, help="same initial population for every run")
    aco.add_argument("--workers", type=int, help="ensemble worker processes")

    synth = common.add_argument_group("synthetic data and error bars")
    synth.add_argument("--noise-scale", type=float, help="Poisson counts per unit concentration (0 = noiseless)")
    synth.add_argument("--blood-fraction", type=float, help="blood mixed into the simulated kidney signal")
    synth.add_argument("--kidney-volume", type=float)
    synth.add_argument("--bladder-volume", type=float)
    synth.add_argument("--count-scale", type=float)

    checks = common.add_argument_group("validation")
    checks.add_argument("--cases", type=int, help="random rate draws per matrix case")
    checks.add_argument("--zero-tac", action="store_const", const=True, help="validate with C_b = 0")

    parser = argparse.ArgumentParser(prog="renal-aco", description="Renal three-compartment kinetics by ant colony search.")
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("simulate", parents=[common], help="write synthetic measurements.csv")
    sub.add_parser("fit", parents=[common], help="single ACO run on a measurement file")
    sub.add_parser("ensemble", parents=[common], help="repeated ACO runs, mean/std and strips")
    sub.add_parser("validate", parents=[common], help="closed forms against the RK4 reference")
    return parser


def config_from_args(args):
    """Config file first, then every flag that was given."""
    raw = read_config_file(args.config) if args.config else {}
    raw["mode"] = args.mode
    for dest, key in _RUN_FLAGS.items():
        value = getattr(args, dest)
        if value is not None:
            raw[key] = str(value) if isinstance(value, Path) else value
    if args.runs is not None:
        raw.pop("seeds", None)
    if args.zero_tac:
        raw["zero_tac"] = True

    aco = dict(raw.get("aco", {}))
    if args.preset:
        aco["preset"] = args.preset
    for dest, key in _ACO_FLAGS.items():
        value = getattr(args, dest)
        if value is not None:
            aco[key] = value
    if args.shared_init:
        aco["shared_init"] = True
    if aco:
        raw["aco"] = aco
    config = run_config_from_dict(raw)
    if args.lower_bound is None and args.upper_bound is None:
        return config
    # one-sided flags keep the other side of the preset box
    lo = config.aco.lower if args.lower_bound is None else [args.lower_bound] * len(RATE_NAMES)
    hi = config.aco.upper if args.upper_bound is None else [args.upper_bound] * len(RATE_NAMES)
    return config.updated(aco=config.aco.updated(bounds=tuple(zip(lo, hi))))


# -----------------------------
# Subcommands
# -----------------------------
def _simulate(config) -> int:
    path = save_measurements(run_simulation(config), config.out / "measurements.csv")
    print(f"wrote {path}")
    return EXIT_OK


def _report(result, config) -> int:
    print(coefficients_frame(result).to_string())
    for path in emit_results(result, config.out):
        print(f"wrote {path}")
    return EXIT_OK


def _fit(config) -> int:
    return _report(run_fit(prepare_data(config), config), config)


def _ensemble(config) -> int:
    return _report(run_ensemble(prepare_data(config), config), config)


def _validate(config) -> int:
    report = cmd_validate(config)
    for check in report.checks:
        status = "ok" if check.passed else "FAIL"
        print(f"{check.name:<22} {check.deviation:12.4e}  (tol {check.tolerance:.1e})  {status}")
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED


COMMANDS = {"simulate": _simulate, "fit": _fit, "ensemble": _ensemble, "validate": _validate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
        return COMMANDS[config.mode](config)
    except (ValueError, OSError) as e:
        logger.debug("run failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
