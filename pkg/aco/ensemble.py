# aco/ensemble.py
"""Repeated independent runs, coefficient statistics and confidence strips."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from kinetics.synth import MeasurementSet
from kinetics.types import RateConstants

from .colony import FitResult, Population, init_population, run_aco
from .config import AcoConfig
from .cost import CostFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """Statistics over runs; strips are model curves at the frame times, one row per run."""

    runs: tuple
    mean: np.ndarray
    std: np.ndarray
    data: MeasurementSet
    kidney_target: np.ndarray
    kidney_strips: np.ndarray
    bladder_strips: np.ndarray
    config: AcoConfig
    initial: Optional[RateConstants] = None

    @property
    def n_runs(self) -> int:
        return len(self.runs)

    @property
    def best(self) -> FitResult:
        return min(self.runs, key=lambda r: r.cost)


def summarize(runs: Sequence[FitResult], data: MeasurementSet, config: AcoConfig) -> EnsembleResult:
    """Mean/std over (thresholded) rates and one forward solve per run."""
    if not runs:
        raise ValueError("at least one run is required")
    cost_fn = CostFunction(data, config)
    rates = np.array([r.rates.as_array() for r in runs])
    curves = [cost_fn.curves(r.rates) for r in runs]
    return EnsembleResult(
        runs=tuple(runs),
        mean=rates.mean(axis=0),
        std=rates.std(axis=0),
        data=data,
        kidney_target=cost_fn.kidney_target,
        kidney_strips=np.array([kidney for kidney, _ in curves]),
        bladder_strips=np.array([bladder for _, bladder in curves]),
        config=config,
        initial=runs[0].initial if config.shared_init else None,
    )


def _run_one(args) -> FitResult:
    data, config, seed, initial = args
    return run_aco(data, config, seed, initial)


def ensemble(
    data: MeasurementSet,
    config: AcoConfig,
    n_runs: int,
    seeds: Optional[Sequence[int]] = None,
) -> EnsembleResult:
    """run_aco once per seed; with shared_init every run starts from the first seed's population."""
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    seeds = list(range(n_runs)) if seeds is None else [int(s) for s in seeds]
    if len(seeds) != n_runs:
        raise ValueError(f"got {len(seeds)} seeds for {n_runs} runs")
    if len(set(seeds)) != len(seeds):
        raise ValueError("seeds must be distinct")

    initial: Optional[Population] = None
    if config.shared_init:
        initial = init_population(config, seeds[0], CostFunction(data, config))

    jobs = [(data, config, seed, initial) for seed in seeds]
    if config.workers > 1 and n_runs > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            runs = list(pool.map(_run_one, jobs))
    else:
        runs = [_run_one(job) for job in jobs]

    logger.info("ensemble of %d runs finished", n_runs)
    return summarize(runs, data, config)
