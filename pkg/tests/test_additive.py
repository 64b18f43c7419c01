import math

import numpy as np
import pytest

from tiedecay import additive
from tiedecay.graph import MODE_STRICTLY_ABOVE, TieMatrix, components, threshold_edges
from tiedecay.seeding import substream

from _helpers import double_sum_mean, random_edge_list

FIG_GCC = dict(p=1e-5, steps=1000)


def params_for(p=0.1, alpha=0.05, steps=500, n=2, s0=0.0):
    return additive.AdditiveParams(n=n, p=p, alpha=alpha, steps=steps, s0=s0)


def test_step_edge_examples():
    assert additive.step_edge(0.0, True, 0.01) == 1.0
    assert additive.step_edge(1.0, False, 0.01) == pytest.approx(0.9900498337, abs=1e-9)
    assert additive.step_edge(2.5, True, 0.01) == 3.5
    with pytest.raises(ValueError):
        additive.step_edge(-0.5, True, 0.01)


def test_params_validation():
    with pytest.raises(ValueError):
        params_for(p=1.0)
    with pytest.raises(ValueError):
        params_for(alpha=0.0)
    with pytest.raises(ValueError):
        params_for(steps=-1)
    with pytest.raises(ValueError):
        params_for(s0=-1.0)
    with pytest.raises(ValueError):
        additive.AdditiveParams(n=1, p=0.1, alpha=0.1, steps=1)


def test_mean_finite_time_matches_literal_double_sum():
    for p, alpha in ((0.1, 0.05), (0.4, 0.3), (0.02, 0.004)):
        params = params_for(p=p, alpha=alpha)
        for t in (0, 1, 2, 5, 17, 60):
            assert additive.mean_finite_time(params, t) == pytest.approx(
                double_sum_mean(p, alpha, t), rel=1e-13, abs=1e-300
            )


def test_mean_finite_time_reference_values():
    params = params_for()
    for t, expected in ((50, 2.0902), (100, 2.2628), (150, 2.2770), (500, 2.2782)):
        assert additive.mean_finite_time(params, t) == pytest.approx(expected, abs=5e-5)
    assert additive.mean_finite_time(params, 0) == 0.0
    with pytest.raises(ValueError):
        additive.mean_finite_time(params, -1)


def test_mean_finite_time_monotone_and_bounded():
    for p, alpha in ((0.1, 0.05), (0.6, 1.3), (0.003, 0.01)):
        params = params_for(p=p, alpha=alpha)
        limit = additive.mean_stationary(p, alpha)
        previous = -1.0
        for t in range(0, 400, 7):
            value = additive.mean_finite_time(params, t)
            assert value >= previous
            assert value <= limit + 1e-12
            previous = value


def test_mean_stationary_values_and_domain():
    assert additive.mean_stationary(0.1, 0.05) == pytest.approx(2.278241, abs=5e-7)
    assert additive.mean_stationary(0.0, 0.05) == 0.0
    assert additive.mean_stationary(0.003, 0.01) == pytest.approx(0.302410, abs=5e-7)
    with pytest.raises(ValueError):
        additive.mean_stationary(1.0, 0.05)
    with pytest.raises(ValueError):
        additive.mean_stationary(0.1, 0.0)


def test_raw_moments_match_closed_forms():
    moments = additive.raw_moments_stationary(0.1, 0.05, 2)
    assert moments[0] == pytest.approx(2.278241, abs=5e-7)
    assert moments[1] == pytest.approx(6.487706, abs=5e-6)
    assert moments[1] - moments[0] ** 2 == pytest.approx(1.297325, abs=5e-7)
    for p in (0.05, 0.3, 0.8):
        for alpha in (0.01, 0.2, 2.0):
            m1, m2 = additive.raw_moments_stationary(p, alpha, 2)
            assert m1 == pytest.approx(additive.mean_stationary(p, alpha), rel=1e-12)
            assert m2 - m1 * m1 == pytest.approx(
                additive.variance_stationary(p, alpha), rel=1e-12
            )


def test_raw_moments_vanish_as_p_goes_to_zero():
    tiny = additive.raw_moments_stationary(1e-9, 0.05, 4)
    assert all(0.0 < m < 1e-6 for m in tiny)


def test_raw_moments_domain():
    with pytest.raises(ValueError):
        additive.raw_moments_stationary(0.0, 0.05, 2)
    with pytest.raises(ValueError):
        additive.raw_moments_stationary(0.1, 0.05, 0)


def test_monte_carlo_moments_match_recursion():
    params = params_for(steps=500)
    ensemble = additive.simulate_edge_ensemble(params, 1_000_000, seed=42)
    s = ensemble.strengths
    targets = additive.raw_moments_stationary(params.p, params.alpha, 3)
    for order, target in enumerate(targets, start=1):
        sample = s**order
        sem = sample.std(ddof=1) / math.sqrt(sample.size)
        assert abs(sample.mean() - target) < 3.5 * sem


def test_initialization_is_forgotten():
    # contraction: by step 500 the ensemble mean is independent of s0
    limit = additive.mean_stationary(0.1, 0.05)
    for s0 in (0.0, 10.0, 100.0):
        params = params_for(s0=s0)
        ensemble = additive.simulate_edge_ensemble(
            params, 100_000, seed=99, record_at=(500,)
        )
        mean, sem = ensemble.records[500]
        assert abs(mean - limit) < 3.0 * sem


def test_simulate_pure_decay_and_bounds():
    params = params_for(p=0.0, alpha=0.05, steps=100, n=20, s0=2.0)
    tm = additive.simulate(params, seed=5)
    expected = 2.0 * math.exp(-0.05 * 100)
    assert np.allclose(tm.strengths, expected, rtol=1e-12)

    params = params_for(p=0.3, alpha=0.05, steps=200, n=20, s0=1.5)
    tm = additive.simulate(params, seed=6)
    assert isinstance(tm, TieMatrix)
    assert float(tm.strengths.max()) <= params.s0 + params.steps
    assert float(tm.strengths.min()) >= 0.0


def test_simulate_deterministic_for_seed():
    params = params_for(p=0.2, alpha=0.1, steps=50, n=12)
    a = additive.simulate(params, seed=123)
    b = additive.simulate(params, seed=123)
    c = additive.simulate(params, seed=124)
    assert np.array_equal(a.strengths, b.strengths)
    assert not np.array_equal(a.strengths, c.strengths)


def test_arrival_sampler_matches_exact_two_step_distribution():
    # T=2 enumerates exactly: 0, sigma (boost then decay), 1, and 2
    p, alpha = 0.37, 0.8
    params = params_for(p=p, alpha=alpha, steps=2)
    sig = params.sigma
    expected = {
        0.0: (1 - p) ** 2,
        sig: p * (1 - p),
        1.0: (1 - p) * p,
        2.0: p * p,
    }
    samples = additive.sample_final_strengths(params, 200_000, substream(3, 0))
    values, counts = np.unique(np.round(samples, 12), return_counts=True)
    assert values.size == 4
    for value, count in zip(values, counts):
        prob = expected[min(expected, key=lambda k: abs(k - value))]
        sem = math.sqrt(prob * (1 - prob) / samples.size)
        assert abs(count / samples.size - prob) < 4.0 * sem


def test_arrival_sampler_matches_step_simulation():
    params = params_for(p=0.05, alpha=0.1, steps=60)
    stepped = additive.simulate_edge_ensemble(params, 150_000, seed=21).strengths
    jumped = additive.sample_final_strengths(params, 150_000, substream(22, 0))
    sem = math.hypot(
        stepped.std(ddof=1) / math.sqrt(stepped.size),
        jumped.std(ddof=1) / math.sqrt(jumped.size),
    )
    assert abs(stepped.mean() - jumped.mean()) < 4.0 * sem
    for g in (0.5, 1.0, 2.0):
        p_a = (stepped >= g).mean()
        p_b = (jumped >= g).mean()
        sem_g = math.sqrt(p_a * (1 - p_a) / stepped.size + p_b * (1 - p_b) / jumped.size)
        assert abs(p_a - p_b) < 4.5 * max(sem_g, 1e-5)


def test_poisson_cdf_boundary_and_values():
    params = additive.AdditiveParams(n=2000, **FIG_GCC, alpha=0.01)
    floor_value = additive.poisson_cdf_approx(params, 1.0 * math.exp(-10))
    assert floor_value == pytest.approx(math.exp(-0.01), rel=1e-12)

    g_b = additive.critical_threshold(params)
    assert additive.poisson_cdf_approx(params, g_b) == pytest.approx(0.99950, abs=1e-5)

    with pytest.raises(ValueError):
        additive.poisson_cdf_approx(params_for(p=1e-4, s0=1.0, steps=100), 1e-30)


def test_poisson_cdf_clamped_and_warns():
    params = params_for(p=0.01, alpha=0.001, steps=400, n=50)  # steps*p = 4
    with pytest.warns(UserWarning):
        value = additive.poisson_cdf_approx(params, 5.0)
    assert 0.0 <= value <= 1.0


def test_critical_threshold_reference_values():
    for alpha, expected, tol in (
        (0.01, 0.6345, 5e-5),
        (0.1, 0.0106, 5e-5),
        (0.001, 0.955533, 1e-5),
    ):
        params = additive.AdditiveParams(n=2000, **FIG_GCC, alpha=alpha)
        assert additive.critical_threshold(params) == pytest.approx(expected, abs=tol)
    with pytest.raises(ValueError):
        additive.critical_threshold(params_for(p=0.0, steps=10))


def test_critical_threshold_inverts_poisson_cdf():
    for alpha in (0.001, 0.01, 0.1):
        params = additive.AdditiveParams(n=2000, **FIG_GCC, alpha=alpha, s0=0.3)
        g = additive.critical_threshold(params)
        assert additive.poisson_cdf_approx(params, g) == pytest.approx(
            1.0 - 1.0 / params.n, abs=1e-12
        )


def test_poisson_approximation_against_exact_sampler():
    # sparse regime: the approximate CDF is accurate to O((steps*p)^2)
    params = additive.AdditiveParams(n=2000, **FIG_GCC, alpha=0.01)
    g = additive.critical_threshold(params)
    samples = additive.sample_final_strengths(params, 1_000_000, substream(17, 0))
    empirical = (samples < g).mean()
    assert abs(empirical - 0.9995) < 1.5e-4


def test_gcc_sweep_rows_and_determinism():
    params = additive.AdditiveParams(n=400, p=1e-4, alpha=0.05, steps=200)
    rows = additive.gcc_sweep(params, [0.2, 0.8], realizations=5, seed=31)
    again = additive.gcc_sweep(params, [0.2, 0.8], realizations=5, seed=31)
    assert rows == again
    assert [r.g for r in rows] == [0.2, 0.8]
    assert all(0.0 < r.mean_fraction <= 1.0 for r in rows)
    assert additive.gcc_sweep(params, [], realizations=3, seed=1) == []
    with pytest.raises(ValueError):
        additive.gcc_sweep(params, [0.5], realizations=0, seed=1)


def test_gcc_sweep_far_above_threshold_leaves_dust():
    params = additive.AdditiveParams(n=2000, **FIG_GCC, alpha=0.1)
    rows = additive.gcc_sweep(params, [0.9], realizations=10, seed=77)
    assert rows[0].mean_fraction <= 5.0 / params.n


def test_zero_threshold_matches_er_census():
    # strengths above 0 are exactly the pairs with at least one interaction,
    # an i.i.d. Bernoulli(1 - (1-p)^steps) edge set
    n, steps, p = 400, 100, 5e-5
    params = additive.AdditiveParams(n=n, p=p, alpha=0.05, steps=steps)
    q = 1.0 - (1.0 - p) ** steps
    realizations = 40
    tie_fracs = np.empty(realizations)
    er_fracs = np.empty(realizations)
    for r in range(realizations):
        tm = TieMatrix(n, additive.sample_final_strengths(params, params.n_pairs, substream(41, r)))
        tie_fracs[r] = components(n, threshold_edges(tm, 0.0, MODE_STRICTLY_ABOVE)).largest_fraction
        er_fracs[r] = components(n, random_edge_list(n, q, substream(42, r))).largest_fraction
    sem = math.hypot(
        tie_fracs.std(ddof=1) / math.sqrt(realizations),
        er_fracs.std(ddof=1) / math.sqrt(realizations),
    )
    assert abs(tie_fracs.mean() - er_fracs.mean()) < 4.0 * sem
