import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aco import (
    AcoConfig,
    CostFunction,
    Population,
    aco_iterate,
    blood_correction,
    cost,
    derive_new_states,
    ensemble,
    init_population,
    kernel_widths,
    rank_log_weights,
    rank_weights,
    reseed,
    run_aco,
)
from aco.colony import sample_states
from kinetics import (
    AcquisitionSchedule,
    CaseKind,
    GammaVariateParams,
    MeasurementSet,
    RateConstants,
    classify,
    derive_matrix,
    simulate_measurements,
)
from kinetics.errors import LengthMismatchError
from utils.config import DEFAULT_TRUTH

FAST = AcoConfig.synthetic(max_iter=20)


# -----------------------------
# Configuration
# -----------------------------
@pytest.mark.parametrize("p, q", [(13, 7), (25, 13), (2, 2), (4, 3)])
def test_new_states_rule(p, q):
    assert derive_new_states(p) == q
    assert AcoConfig(population_size=p).new_states == q


def test_presets():
    synthetic = AcoConfig.synthetic()
    assert (synthetic.population_size, synthetic.new_states, synthetic.q, synthetic.xi) == (13, 7, 0.015, 0.4)
    assert synthetic.v_b == 0.0
    real = AcoConfig.real_data()
    assert (real.population_size, real.new_states, real.q, real.xi, real.v_b) == (25, 13, 0.0001, 0.65, 0.2)
    np.testing.assert_array_equal(real.upper, 5.0)
    assert synthetic.restarts > 0 and real.restarts > 0
    assert AcoConfig().restarts == 0


def test_updated_rederives_new_states():
    assert AcoConfig.synthetic().updated(population_size=25).new_states == 13
    assert AcoConfig.synthetic().updated(population_size=25, new_states=4).new_states == 4


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(population_size=1),
        dict(new_states=0),
        dict(q=0.0),
        dict(xi=-1.0),
        dict(v_b=1.0),
        dict(bounds=((0.0, 1.0),) * 5),
        dict(bounds=((-0.1, 1.0),) * 6),
        dict(bounds=((1.0, 1.0),) * 6),
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        AcoConfig(**kwargs)


# -----------------------------
# Weights and kernels
# -----------------------------
@settings(max_examples=100, deadline=None)
@given(p=st.integers(min_value=2, max_value=60), q=st.floats(min_value=1e-4, max_value=1.0))
def test_rank_weights_favour_low_cost(p, q):
    log_w = rank_log_weights(p, q)
    assert np.all(np.diff(log_w) < 0)
    w = rank_weights(p, q)
    assert w.sum() == pytest.approx(1.0)
    assert np.all(w >= 0)
    assert np.all(np.diff(w) <= 0)


def test_rank_weights_with_strong_emphasis():
    log_w = rank_log_weights(13, 0.015)
    assert np.all(np.diff(log_w) < 0)
    w = rank_weights(13, 0.015)
    assert w[0] > w[1] > 0.0
    # far ranks underflow; they are simply never drawn
    assert np.all(w[9:] == 0.0)
    picks = np.random.default_rng(0).choice(13, size=1000, p=w)
    assert np.all(picks < 9)


def test_kernel_widths_hand_case():
    states = np.array([[0.0], [1.0], [3.0]])
    np.testing.assert_allclose(kernel_widths(states, 0.4), [[0.8], [0.6], [1.0]])


def test_kernel_widths_scale_with_xi():
    states = np.random.default_rng(0).uniform(size=(13, 6))
    np.testing.assert_allclose(kernel_widths(states, 0.8), 2.0 * kernel_widths(states, 0.4))


def test_identical_states_have_zero_width():
    states = np.tile(np.linspace(0.1, 0.6, 6), (5, 1))
    np.testing.assert_array_equal(kernel_widths(states, 0.4), 0.0)


def test_identical_population_reproduces_itself():
    state = np.linspace(0.1, 0.6, 6)
    pop = Population(np.tile(state, (13, 1)), np.zeros(13))
    fresh = sample_states(pop, AcoConfig.synthetic(), np.random.default_rng(0))
    assert fresh.shape == (7, 6)
    np.testing.assert_array_equal(fresh, np.tile(state, (7, 1)))
    assert pop.diameter == 0.0


def test_samples_stay_in_bounds():
    config = AcoConfig.synthetic(xi=5.0)
    rng = np.random.default_rng(1)
    pop = Population.ranked(rng.uniform(size=(13, 6)), lambda s: float(np.sum(s)))
    for _ in range(20):
        fresh = sample_states(pop, config, rng)
        assert np.all(fresh >= config.lower) and np.all(fresh <= config.upper)


def test_population_must_be_sorted():
    with pytest.raises(ValueError):
        Population(np.zeros((3, 6)), [2.0, 1.0, 3.0])
    pop = Population.ranked(np.eye(6)[:3], lambda s: -float(np.argmax(s)))
    np.testing.assert_array_equal(pop.costs, [-2.0, -1.0, 0.0])
    assert pop.best_cost == -2.0


def test_iterate_keeps_size_and_order():
    def sphere(s):
        return float(np.sum((np.asarray(s) - 0.3) ** 2))

    config = AcoConfig.synthetic()
    rng = np.random.default_rng(2)
    pop = init_population(config, 2, sphere)
    start = best = pop.best_cost
    for _ in range(30):
        pop = aco_iterate(pop, config, sphere, rng)
        assert len(pop) == config.population_size
        assert np.all(np.diff(pop.costs) >= 0)
        assert pop.best_cost <= best
        best = pop.best_cost
    assert best < start


# -----------------------------
# Cost
# -----------------------------
def test_blood_correction_examples():
    assert blood_correction([1.0], [0.5], 0.2)[0] == pytest.approx(1.125)
    np.testing.assert_array_equal(blood_correction([1.0, 2.0], [5.0, 5.0], 0.0), [1.0, 2.0])
    with pytest.raises(LengthMismatchError):
        blood_correction([1.0, 2.0], [1.0], 0.2)
    with pytest.raises(ValueError):
        blood_correction([1.0], [1.0], 1.0)


@given(
    kidney=st.floats(min_value=0.0, max_value=100.0),
    blood=st.floats(min_value=0.0, max_value=100.0),
    v_b=st.floats(min_value=0.0, max_value=0.9),
)
def test_blood_correction_undoes_mixing(kidney, blood, v_b):
    mixed = (1.0 - v_b) * kidney + v_b * blood
    assert blood_correction([mixed], [blood], v_b)[0] == pytest.approx(kidney, rel=1e-9, abs=1e-9)


def test_cost_is_zero_at_the_truth(noiseless_data):
    assert cost(DEFAULT_TRUTH, noiseless_data, AcoConfig.synthetic()) <= 1e-10


def test_cost_is_positive_for_noisy_data(noisy_data):
    assert cost(DEFAULT_TRUTH, noisy_data, AcoConfig.synthetic()) > 0


def test_cost_of_zero_rates_is_data_energy(noiseless_data):
    expected = np.sum(noiseless_data.kidney ** 2) + np.sum(noiseless_data.bladder ** 2)
    assert cost(RateConstants.zeros(), noiseless_data, AcoConfig.synthetic()) == pytest.approx(expected, rel=1e-12)


def test_two_frame_cost_by_hand():
    data = MeasurementSet(
        schedule=AcquisitionSchedule([1.0, 2.0]),
        kidney=[1.0, 2.0],
        bladder=[0.1, 0.3],
        blood=[0.5, 1.0],
    )
    # no inflow from blood: the model curves are identically zero
    k = RateConstants(0.5, 0.1, 0.1, 0.2, 0.0, 0.0)
    expected = 1.125 ** 2 + 2.25 ** 2 + 0.1 ** 2 + 0.3 ** 2
    assert cost(k, data, AcoConfig.synthetic(v_b=0.2)) == pytest.approx(expected, rel=1e-12)


def test_cost_function_accepts_arrays(noiseless_data):
    fn = CostFunction(noiseless_data, AcoConfig.synthetic())
    assert fn(DEFAULT_TRUTH.as_array()) == fn(DEFAULT_TRUTH)
    assert fn.evaluations == 2


def test_cost_falls_as_counts_grow(schedule):
    means = []
    for scale in (1e2, 1e3, 1e4):
        costs = [
            cost(DEFAULT_TRUTH, simulate_measurements(DEFAULT_TRUTH, GammaVariateParams(), schedule, scale, seed=s), FAST)
            for s in range(20)
        ]
        assert min(costs) > 0
        means.append(np.mean(costs))
    assert means[0] > means[1] > means[2]


def test_model_curves_match_noiseless_data(noiseless_data):
    kidney, bladder = CostFunction(noiseless_data, AcoConfig.synthetic()).curves(DEFAULT_TRUTH)
    np.testing.assert_allclose(kidney, noiseless_data.kidney, rtol=1e-12)
    np.testing.assert_allclose(bladder, noiseless_data.bladder, rtol=1e-12)


# -----------------------------
# Runs
# -----------------------------
def test_run_is_deterministic(noisy_data):
    a = run_aco(noisy_data, FAST, seed=5)
    b = run_aco(noisy_data, FAST, seed=5)
    assert a.rates == b.rates
    assert a.cost == b.cost
    assert a.history == b.history


def test_run_history_and_thresholding(noisy_data):
    result = run_aco(noisy_data, FAST, seed=1)
    assert len(result.history) == result.iterations + 1
    assert all(x >= y for x, y in zip(result.history, result.history[1:]))
    rates = result.rates.as_array()
    assert np.all((rates == 0.0) | (rates >= FAST.threshold))
    assert result.cost == CostFunction(noisy_data, FAST)(result.rates)
    assert result.case is classify(derive_matrix(result.rates), FAST.threshold)
    assert result.seed == 1
    assert 1 <= result.iterations <= FAST.max_iter


def test_loose_tolerance_converges_immediately(noisy_data):
    result = run_aco(noisy_data, FAST.updated(conv_tol=1e9, restarts=0), seed=0)
    assert result.converged
    assert result.iterations == 1
    assert result.restarts == 0


def test_collapse_reseeds_until_progress_stalls(noisy_data):
    result = run_aco(noisy_data, FAST.updated(conv_tol=1e9, restarts=3), seed=0)
    assert result.converged
    assert result.iterations >= 3
    assert result.restarts == result.iterations - 1
    assert all(x >= y for x, y in zip(result.history, result.history[1:]))


def test_reseed_keeps_the_best_state(noisy_data):
    config = AcoConfig.synthetic()
    fn = CostFunction(noisy_data, config)
    rng = np.random.default_rng(3)
    pop = init_population(config, rng, fn)
    fresh = reseed(pop, config, fn, rng)
    assert len(fresh) == len(pop)
    assert any(np.array_equal(s, pop.best_state) for s in fresh.states)
    assert fresh.best_cost <= pop.best_cost
    assert np.all(np.diff(fresh.costs) >= 0)
    assert np.all((fresh.states >= config.lower) & (fresh.states <= config.upper))


def test_restarts_continue_past_the_first_collapse(noiseless_data):
    config = AcoConfig.synthetic(max_iter=300)
    single = run_aco(noiseless_data, config.updated(restarts=0), seed=2)
    repeated = run_aco(noiseless_data, config, seed=2)
    assert single.converged and single.iterations < config.max_iter
    assert repeated.history[: len(single.history)] == single.history
    assert repeated.iterations > single.iterations
    assert repeated.restarts >= 1
    assert repeated.history[-1] <= single.history[-1]


# -----------------------------
# Ensembles
# -----------------------------
def test_ensemble_statistics(noisy_data):
    config = AcoConfig.synthetic(max_iter=5)
    result = ensemble(noisy_data, config, 3, seeds=[4, 5, 6])
    rates = np.array([r.rates.as_array() for r in result.runs])
    np.testing.assert_allclose(result.mean, rates.mean(axis=0))
    np.testing.assert_allclose(result.std, rates.std(axis=0, ddof=0))
    assert [r.seed for r in result.runs] == [4, 5, 6]
    assert result.kidney_strips.shape == (3, len(noisy_data))
    assert result.bladder_strips.shape == (3, len(noisy_data))
    assert result.best.cost == min(r.cost for r in result.runs)
    assert result.initial is None


def test_parallel_ensemble_matches_serial(noisy_data):
    config = AcoConfig.synthetic(max_iter=5)
    serial = ensemble(noisy_data, config, 2)
    parallel = ensemble(noisy_data, config.updated(workers=2), 2)
    assert [r.seed for r in parallel.runs] == [0, 1]
    np.testing.assert_array_equal(parallel.mean, serial.mean)
    np.testing.assert_array_equal(parallel.kidney_strips, serial.kidney_strips)


def test_single_run_ensemble_has_zero_std(noisy_data):
    result = ensemble(noisy_data, AcoConfig.synthetic(max_iter=3), 1)
    np.testing.assert_array_equal(result.std, 0.0)


def test_shared_initialization(noisy_data):
    config = AcoConfig.synthetic(max_iter=3, shared_init=True)
    result = ensemble(noisy_data, config, 3)
    assert result.initial is not None
    assert all(r.initial == result.initial for r in result.runs)


def test_ensemble_seed_checks(noisy_data):
    with pytest.raises(ValueError):
        ensemble(noisy_data, FAST, 2, seeds=[1])
    with pytest.raises(ValueError):
        ensemble(noisy_data, FAST, 2, seeds=[1, 1])
    with pytest.raises(ValueError):
        ensemble(noisy_data, FAST, 0)


def test_case_kind_values():
    assert {c.value for c in CaseKind} == {"full", "lower", "upper", "diagonal"}
