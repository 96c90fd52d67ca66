# aco/colony.py
"""Continuous ant colony search over the six rate constants.

Each iteration ranks the P states by cost, builds one Gaussian kernel per
state and coordinate (mean = the state, width = xi times its mean distance to
the others), draws Q new states by picking a kernel per coordinate with
rank-based probability, and keeps the P cheapest of the P + Q.

With strong rank emphasis every kernel sits on the best state and the
population shrinks around it within a few dozen iterations. When
config.restarts > 0 a collapsed population is redrawn uniformly except for
its best state, and the run only stops once that many collapses in a row have
not lowered the best cost.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import softmax
from scipy.stats import norm

from kinetics.solvers import classify, derive_matrix
from kinetics.types import RATE_NAMES, CaseKind, RateConstants
from kinetics.synth import MeasurementSet

from .config import AcoConfig
from .cost import CostFunction

logger = logging.getLogger(__name__)

CostFn = Callable[[np.ndarray], float]

# relative drop of the best cost between two collapses that counts as progress
MIN_CYCLE_GAIN = 1e-6


# -----------------------------
# Population
# -----------------------------
@dataclass(frozen=True, eq=False)
class Population:
    """States (P x 6) sorted by nondecreasing cost."""

    states: np.ndarray
    costs: np.ndarray

    def __post_init__(self):
        states = np.array(self.states, dtype=float)
        costs = np.array(self.costs, dtype=float)
        if states.ndim != 2 or states.shape[1] != len(RATE_NAMES):
            raise ValueError(f"states must have shape (P, {len(RATE_NAMES)}), got {states.shape}")
        if costs.shape != (states.shape[0],):
            raise ValueError("one cost per state is required")
        if np.any(np.diff(costs) < 0):
            raise ValueError("population must be sorted by nondecreasing cost")
        states.setflags(write=False)
        costs.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "costs", costs)

    @classmethod
    def ranked(cls, states, cost_fn: CostFn, costs=None) -> "Population":
        states = np.asarray(states, dtype=float)
        if costs is None:
            costs = np.array([cost_fn(s) for s in states])
        order = np.argsort(costs, kind="stable")
        return cls(states[order], np.asarray(costs)[order])

    def __len__(self):
        return self.states.shape[0]

    @property
    def best_state(self) -> np.ndarray:
        return self.states[0]

    @property
    def best_cost(self) -> float:
        return float(self.costs[0])

    @property
    def diameter(self) -> float:
        """Largest coordinate difference between any two states."""
        return float(np.max(np.ptp(self.states, axis=0)))


def init_population(config: AcoConfig, seed, cost_fn: CostFn) -> Population:
    """P states drawn uniformly from the bounds box, ranked by cost."""
    rng = np.random.default_rng(seed)
    states = rng.uniform(config.lower, config.upper, size=(config.population_size, len(RATE_NAMES)))
    return Population.ranked(states, cost_fn)


# -----------------------------
# Kernel construction and sampling
# -----------------------------
def rank_log_weights(population_size: int, q: float) -> np.ndarray:
    """log N(i; 1, qP) for ranks i = 1..P."""
    ranks = np.arange(1, population_size + 1)
    return norm.logpdf(ranks, loc=1.0, scale=q * population_size)


def rank_weights(population_size: int, q: float) -> np.ndarray:
    """Selection probabilities of the ranked states, summing to 1.

    Strictly decreasing in rank as exact values; rank_log_weights keeps that
    order in floating point. Here the tail can underflow to 0.0 when qP is
    small (P = 13, q = 0.015 leaves ranks 10..13 at exactly zero), which only
    means those kernels are never picked.
    """
    return softmax(rank_log_weights(population_size, q))


def kernel_widths(states: np.ndarray, xi: float) -> np.ndarray:
    """s[l, j] = xi / (P - 1) * sum_p |u[p, j] - u[l, j]|."""
    n = states.shape[0]
    distances = np.abs(states[:, None, :] - states[None, :, :]).sum(axis=1)
    return xi / (n - 1) * distances


def sample_states(pop: Population, config: AcoConfig, rng) -> np.ndarray:
    """Q new states, clipped into the bounds box."""
    rng = np.random.default_rng(rng)
    n_dims = pop.states.shape[1]
    weights = rank_weights(len(pop), config.q)
    picks = rng.choice(len(pop), size=(config.new_states, n_dims), p=weights)
    cols = np.arange(n_dims)
    means = pop.states[picks, cols]
    widths = kernel_widths(pop.states, config.xi)[picks, cols]
    return np.clip(rng.normal(means, widths), config.lower, config.upper)


def aco_iterate(pop: Population, config: AcoConfig, cost_fn: CostFn, rng) -> Population:
    """One generation: sample Q states, keep the P cheapest of P + Q."""
    rng = np.random.default_rng(rng)
    fresh = sample_states(pop, config, rng)
    fresh_costs = np.array([cost_fn(s) for s in fresh])
    states = np.vstack([pop.states, fresh])
    costs = np.concatenate([pop.costs, fresh_costs])
    order = np.argsort(costs, kind="stable")[: len(pop)]
    return Population(states[order], costs[order])


def reseed(pop: Population, config: AcoConfig, cost_fn: CostFn, rng) -> Population:
    """Keep the best state, redraw the other P - 1 uniformly from the bounds box."""
    rng = np.random.default_rng(rng)
    fresh = rng.uniform(config.lower, config.upper, size=(len(pop) - 1, pop.states.shape[1]))
    states = np.vstack([pop.best_state[None, :], fresh])
    costs = np.concatenate([[pop.best_cost], [cost_fn(s) for s in fresh]])
    return Population.ranked(states, cost_fn, costs)


# -----------------------------
# Full run
# -----------------------------
@dataclass(frozen=True)
class FitResult:
    rates: RateConstants
    cost: float
    iterations: int
    converged: bool
    case: CaseKind
    history: tuple
    seed: Optional[int] = None
    initial: Optional[RateConstants] = None
    restarts: int = 0


def run_aco(
    data: MeasurementSet,
    config: AcoConfig,
    seed=None,
    initial: Optional[Population] = None,
) -> FitResult:
    """Search until the population collapses below conv_tol or max_iter is hit.

    A collapse ends the run once config.restarts collapses in a row brought
    no progress; before that the population is reseeded around its best
    state. Reported rates below config.threshold are set to 0 and the cost
    and matrix case are recomputed for the thresholded rates.
    """
    cost_fn = CostFunction(data, config)
    rng = np.random.default_rng(seed)
    pop = initial if initial is not None else init_population(config, rng, cost_fn)
    if len(pop) != config.population_size:
        raise ValueError(f"initial population has {len(pop)} states, expected {config.population_size}")
    start = RateConstants.from_array(pop.best_state)

    history = [pop.best_cost]
    converged = False
    iterations = 0
    restarts = 0
    stalls = 0
    cycle_start = pop.best_cost
    while iterations < config.max_iter:
        pop = aco_iterate(pop, config, cost_fn, rng)
        iterations += 1
        history.append(pop.best_cost)
        if iterations % 100 == 0:
            logger.debug("iteration %d: best cost %.6g, diameter %.3g", iterations, pop.best_cost, pop.diameter)
        if pop.diameter >= config.conv_tol:
            continue

        stalls = 0 if pop.best_cost < cycle_start * (1.0 - MIN_CYCLE_GAIN) else stalls + 1
        if stalls >= config.restarts or iterations == config.max_iter:
            converged = True
            break
        pop = reseed(pop, config, cost_fn, rng)
        cycle_start = pop.best_cost
        restarts += 1
        logger.debug("iteration %d: collapsed at cost %.6g, reseeded (%d stalls)", iterations, cycle_start, stalls)

    rates = RateConstants.from_array(pop.best_state).thresholded(config.threshold)
    result = FitResult(
        rates=rates,
        cost=cost_fn(rates),
        iterations=iterations,
        converged=converged,
        case=classify(derive_matrix(rates), config.threshold),
        history=tuple(history),
        seed=int(seed) if isinstance(seed, (int, np.integer)) else None,
        initial=start,
        restarts=restarts,
    )
    logger.info(
        "seed %s: cost %.6g after %d iterations, %d restarts (%s, %s case)",
        result.seed, result.cost, iterations, restarts,
        "converged" if converged else "max_iter reached", result.case.value,
    )
    return result
