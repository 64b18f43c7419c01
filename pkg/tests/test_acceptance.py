"""Release acceptance suite.

One test per criterion, each at its pinned tolerance, printing one
``ACCEPTANCE PASS/FAIL`` line (run with ``pytest -s`` to see the lines as
they happen; failures echo captured output automatically).

Two sub-criteria are implemented exactly as stated and are expected to
fail; the causes are analyzed in the failure messages:

* the additive-model threshold sweep at decay rate 0.1 -- the closed-form
  critical threshold inherits an error of order (steps * p)^2 / 2 from the
  single-interaction assumption, which at this decay rate displaces the
  observed transition ~34% below the predicted 0.0106;
* the SIR lambda = 1 band check -- near the epidemic peak the saturating
  per-susceptible infection probability 1 - (1 - P beta)^I sits ~11% below
  the recursion's linear beta I S / N term, a systematic model difference
  roughly thirty standard errors wide at 100 realizations.
"""

import math

import numpy as np
import pytest
from scipy import stats

from tiedecay import additive, fdsolver, reset, sir, walk
from tiedecay.graph import components, flat_to_pairs
from tiedecay.seeding import substream

from _helpers import (
    bfs_component_sizes,
    crossing_location,
    er_largest_fraction_mean,
    ks_critical_value,
    lattice_ks_statistic,
    random_edge_list,
)

SEED = 20260811


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {status}: {name}{suffix}")
    assert ok, f"{name}{suffix}"


@pytest.fixture(scope="module")
def er_critical_level_2000():
    return er_largest_fraction_mean(2000, 1.0 / 2000, realizations=200, seed=SEED + 1)


@pytest.fixture(scope="module")
def er_critical_level_1000():
    return er_largest_fraction_mean(1000, 1.0 / 1000, realizations=250, seed=SEED + 2)


# -- criterion: additive-model mean convergence ------------------------------


def test_additive_mean_convergence():
    params = additive.AdditiveParams(n=3000, p=0.1, alpha=0.05, steps=500)
    checkpoints = (50, 100, 150, 500)
    ensemble = additive.simulate_edge_ensemble(
        params, params.n_pairs, seed=SEED, record_at=checkpoints
    )
    mc_targets = {50: 2.0368, 100: 2.2524, 150: 2.2751, 500: 2.2782}
    analytic_targets = {50: 2.0902, 100: 2.2628, 150: 2.2770, 500: 2.2782}

    details = []
    ok = True
    for t in checkpoints:
        mean, sem = ensemble.records[t]
        if abs(mean - mc_targets[t]) >= 3.0 * sem:
            ok = False
        details.append(f"t={t}: mc {mean:.5f} vs {mc_targets[t]} (sem {sem:.5f})")
        analytic = additive.mean_finite_time(params, t)
        if abs(analytic - analytic_targets[t]) > 5e-5:
            ok = False
            details.append(f"analytic at t={t}: {analytic:.6f} != {analytic_targets[t]}")
    report("additive mean convergence", ok, "; ".join(details))


# -- criterion: additive-model variance identity -----------------------------


def test_additive_variance_identity():
    worst = 0.0
    for p in np.linspace(0.05, 0.9, 10):
        for alpha in np.logspace(-2, 1, 10):
            m1, m2 = additive.raw_moments_stationary(float(p), float(alpha), 2)
            target = additive.variance_stationary(float(p), float(alpha))
            worst = max(worst, abs((m2 - m1 * m1) - target) / target)
    report(
        "additive variance identity (10x10 grid)",
        worst <= 1e-12,
        f"worst relative deviation {worst:.2e}",
    )


# -- criterion: additive-model threshold phase transition --------------------


@pytest.mark.parametrize(
    "alpha,target",
    [(0.001, 0.9555), (0.01, 0.6345), (0.1, 0.0106)],
    ids=["alpha=0.001", "alpha=0.01", "alpha=0.1"],
)
def test_additive_gcc_transition(alpha, target, er_critical_level_2000):
    level, level_sem = er_critical_level_2000
    params = additive.AdditiveParams(n=2000, p=1e-5, alpha=alpha, steps=1000)
    factors = np.geomspace(0.35, 1.6, 14)
    thresholds = [float(f) * target for f in factors]
    rows = additive.gcc_sweep(params, thresholds, realizations=200, seed=SEED + 3)
    gs = np.array([row.g for row in rows])
    fractions = np.array([row.mean_fraction for row in rows])
    crossing = crossing_location(np.log(gs), fractions, level)
    g_star = math.exp(crossing)
    offset = g_star / target - 1.0
    report(
        f"additive threshold transition at decay {alpha}",
        abs(offset) <= 0.10,
        f"observed transition g*={g_star:.4g} vs predicted {target} "
        f"({offset:+.1%}; critical level {level:.4f}+-{level_sem:.4f})",
    )


# -- criterion: reset-model giant-component criterion ------------------------


def test_reset_prob_active_printed_values():
    p = 1.0 / 1100.0
    a = reset.prob_active(p, 0.01, 0.95)
    b = reset.prob_active(p, 0.01, 0.995)
    ok = abs(a - 0.0054) <= 5e-5 and abs(b - 9.09e-4) <= 5e-7
    report(
        "reset activity probability printed values",
        ok,
        f"P(s>=0.95)={a:.6f}, P(s>=0.995)={b:.8f}",
    )


def test_reset_empirical_activity_long_run():
    p = 1.0 / 1100.0
    params = reset.ResetParams(n=1000, p=p, alpha=0.01, steps=3000, g=0.95)
    samples = reset.simulate_edge_ensemble(params, 200_000, seed=SEED + 4)
    ok = True
    details = []
    for g in (0.95, 0.995):
        target = reset.prob_active(p, 0.01, g)
        hit = float((samples >= g).mean())
        sem = math.sqrt(target * (1.0 - target) / samples.size)
        details.append(f"g={g}: {hit:.6f} vs {target:.6f} (sem {sem:.1e})")
        if abs(hit - target) >= 3.0 * sem:
            ok = False
    report("reset empirical activity at 3000 steps", ok, "; ".join(details))


@pytest.mark.parametrize(
    "alpha,p_crit_printed",
    [(0.01, 9e-5), (0.1, 5e-4), (1.0, 1e-3)],
    ids=["alpha=0.01", "alpha=0.1", "alpha=1"],
)
def test_reset_sweep_transition(alpha, p_crit_printed, er_critical_level_1000):
    level, level_sem = er_critical_level_1000
    params = reset.ResetParams(n=1000, p=0.5, alpha=alpha, steps=500, g=0.9)
    factors = np.geomspace(0.4, 2.5, 9)
    grid = [float(f) * p_crit_printed for f in factors]
    rows = reset.gcc_sweep(params, grid, realizations=250, seed=SEED + 5)
    ps = np.array([row.p for row in rows])
    fractions = np.array([row.mean_fraction for row in rows])
    # order by descending p so the curve runs from above the level downward
    crossing = crossing_location(np.log(ps[::-1]), fractions[::-1], level)
    p_star = math.exp(crossing)
    offset = p_star / p_crit_printed - 1.0
    report(
        f"reset sweep transition at decay {alpha}",
        abs(offset) <= 0.20,
        f"observed transition p*={p_star:.4g} vs printed {p_crit_printed} ({offset:+.1%})",
    )


# -- criterion: diffusion law -------------------------------------------------


def test_diffusion_law():
    params = walk.WalkParams(dx=5e-3, dt=1e-5, t_total=0.03, delta=0.0)
    n_edges = 100_000
    x = walk.simulate_walk(params, n_edges, seed=SEED + 6)
    variance = float(x.var(ddof=1))
    target = 2.0 * params.k * params.t_total
    variance_ok = abs(variance - target) <= 0.05 * target

    diffusivity = params.k
    ks = lattice_ks_statistic(
        x,
        lambda q: walk.gaussian_cdf(q, params.t_total, diffusivity),
        cell_halfwidth=params.dx,
    )
    critical = ks_critical_value(n_edges, 0.01)
    ks_ok = ks < critical
    report(
        "diffusion law (variance and KS)",
        variance_ok and ks_ok,
        f"variance {variance:.5f} vs {target}, KS {ks:.5f} vs critical {critical:.5f}",
    )


# -- criterion: bounded drift-diffusion stationarity --------------------------


def test_convection_diffusion_stationary_values():
    grid = fdsolver.Grid(dx=5e-3, lower=0.5, upper=2.0)
    coeffs = fdsolver.SchemeCoeffs.from_drift(0.075)
    op = fdsolver.build_transition_matrix(grid, coeffs)
    state = fdsolver.stationary_state(op, grid)
    u = state.values
    boundary = float(u[-1])
    boundary_ok = abs(boundary - 52.174) <= 1e-3

    ratio_target = 0.575 / 0.425
    ratios = u[1:] / u[:-1]
    ratio_err = float(np.max(np.abs(ratios - ratio_target)))
    ratio_ok = ratio_err <= 1e-9

    # The stationary boundary value does not depend on where the bound sits,
    # so the refinement study runs on a compact grid (direct backend); its
    # coarsest level is cross-checked against the power-iteration value on
    # the full grid above.
    errors = []
    for dx in (5e-3, 2.5e-3, 1.25e-3, 6.25e-4):
        g = fdsolver.Grid(dx=dx, lower=0.1, upper=0.5)
        c = fdsolver.SchemeCoeffs.from_drift(15.0 * dx)
        s = fdsolver.stationary_state_direct(fdsolver.build_transition_matrix(g, c), g)
        errors.append(abs(float(s.values[-1]) - 60.0))
    coarse_consistent = abs((60.0 - errors[0]) - boundary) <= 1e-9
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(3)]
    orders_ok = all(0.8 < o < 1.2 for o in orders) and coarse_consistent

    report(
        "drift-diffusion stationary boundary, ratio, refinement",
        boundary_ok and ratio_ok and orders_ok,
        f"boundary {boundary:.4f}, max ratio error {ratio_err:.2e}, orders "
        + ", ".join(f"{o:.2f}" for o in orders),
    )


def test_convection_diffusion_monte_carlo_matches_field():
    params = walk.WalkParams(
        dx=5e-3, dt=1e-5, t_total=0.05, delta=0.075, w=2.0, lower=25.0
    )
    grid = fdsolver.Grid.for_walk(params)
    coeffs = fdsolver.SchemeCoeffs.from_drift(params.delta)
    marched = fdsolver.evolve(
        fdsolver.Field.delta_mass(grid), coeffs, params.steps, audit_every=1000
    )
    probs = marched.field.values * grid.dx

    realizations, edges_each = 100, 10_000
    origin = grid.index_of(0.0)
    counts = np.zeros(grid.n_points, dtype=np.int64)
    for r in range(realizations):
        idx = walk.simulate_walk_indices(params, edges_each, seed=SEED + 7 + r)
        counts += np.bincount(idx + origin, minlength=grid.n_points)
    total = realizations * edges_each

    expected = probs * total
    live = expected >= 10.0
    z = (counts[live] - expected[live]) / np.sqrt(
        expected[live] * (1.0 - probs[live])
    )
    z_max = float(np.max(np.abs(z)))
    z_ok = z_max < 5.0
    empty_ok = int(counts[probs == 0.0].sum()) == 0

    ks = float(
        np.max(np.abs(np.cumsum(counts) / total - np.cumsum(probs)))
    )
    ks_ok = ks < ks_critical_value(total, 0.01)
    report(
        "drift-diffusion Monte Carlo vs marched field",
        z_ok and empty_ok and ks_ok,
        f"max |z| {z_max:.2f} over {int(live.sum())} bins, KS {ks:.2e}, "
        f"mass drift {marched.max_mass_drift:.1e}",
    )


# -- criterion: mass conservation over a long march ---------------------------


def test_mass_conservation_one_million_steps():
    grid = fdsolver.Grid(dx=0.01, lower=0.3, upper=0.1)
    coeffs = fdsolver.SchemeCoeffs.from_drift(0.075)
    result = fdsolver.evolve(fdsolver.Field.delta_mass(grid), coeffs, 1_000_000)
    report(
        "mass conservation over 1e6 steps",
        result.max_mass_drift <= 1e-10,
        f"max drift {result.max_mass_drift:.2e}",
    )


# -- criterion: SIR regimes ----------------------------------------------------


def _sir_setup(lam: float):
    n_pop, i0, steps = 5000, 10, 150
    params = sir.SirParams.from_lambda(0.6, 0.1, n_pop, lam)
    discrete = sir.sir_discrete_trajectory(
        sir.SirParams.from_lambda(0.6, 0.1, n_pop, 1.0), (n_pop - i0, i0, 0), steps
    )
    runs = np.empty((100, steps + 1, 3))
    for r in range(100):
        rng = substream(SEED + 8, int(lam * 10), r)
        state = (n_pop - i0, i0, 0)
        runs[r, 0] = state
        for t in range(steps):
            state = sir.sir_tiedecay_step(state, params, rng)
            runs[r, t + 1] = state
    return discrete, runs


def test_sir_lambda_one_tracks_recursion():
    discrete, runs = _sir_setup(1.0)
    mean = runs.mean(axis=0)
    sem = runs.std(axis=0, ddof=1) / 10.0
    target = np.column_stack((discrete.s, discrete.i, discrete.r))
    gap = np.abs(mean - target)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sem > 0, gap / sem, np.where(gap > 0, np.inf, 0.0))
    z_max = float(np.nanmax(z))
    worst = np.unravel_index(int(np.nanargmax(z)), z.shape)
    report(
        "SIR lambda=1 within 3-standard-error bands",
        z_max <= 3.0,
        f"max |z| {z_max:.1f} at step {worst[0]}, compartment {'SIR'[worst[1]]}: "
        f"ensemble {mean[worst]:.1f} vs recursion {target[worst]:.1f} "
        f"(sem {sem[worst]:.2f}); the saturating contact aggregation lowers the "
        "peak infection rate by ~11%, a genuine model difference",
    )


def test_sir_lambda_three_peaks_earlier():
    discrete, runs = _sir_setup(3.0)
    peaks = runs[:, :, 1].argmax(axis=1)
    sem = peaks.std(ddof=1) / 10.0
    t_crit = stats.t.ppf(0.99, df=99)
    upper = peaks.mean() + t_crit * sem
    report(
        "SIR lambda=3 peak strictly earlier (99% one-sided)",
        upper < discrete.peak_step,
        f"mean peak {peaks.mean():.2f} (+{t_crit:.2f} sem = {upper:.2f}) vs "
        f"recursion peak {discrete.peak_step}",
    )


def test_sir_lambda_small_attack_rate_smaller():
    discrete, runs = _sir_setup(0.3)
    attack = runs[:, -1, 2] / 5000.0
    sem = attack.std(ddof=1) / 10.0
    t_crit = stats.t.ppf(0.99, df=99)
    upper = attack.mean() + t_crit * sem
    report(
        "SIR lambda=0.3 attack rate strictly smaller (99% one-sided)",
        upper < discrete.attack_rate,
        f"mean attack {attack.mean():.4f} (+{t_crit:.2f} sem = {upper:.4f}) vs "
        f"recursion {discrete.attack_rate:.4f}",
    )


# -- criterion: oracle suites ---------------------------------------------------


def test_oracle_union_find_vs_bfs():
    rng = substream(SEED + 9, 0)
    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(2, 65))
        p = float(rng.uniform(0.0, 4.0 / n))
        edges = random_edge_list(n, p, rng)
        ours = list(components(n, edges).component_sizes)
        oracle = bfs_component_sizes(n, edges)
        if ours != oracle:
            mismatches += 1
    report(
        "union-find census vs BFS oracle (1000 graphs)",
        mismatches == 0,
        f"{mismatches} mismatching graphs",
    )


def test_oracle_aggregate_infection_chi_square():
    n_inf, n_sus = 5, 15
    beta_bar, p_active = 0.4, 0.25
    p_star = sir.infection_probability(p_active, beta_bar, n_inf)
    trials = 100_000
    rng = substream(SEED + 10, 0)
    contacts = rng.random((trials, n_sus, n_inf)) < p_active
    transmit = rng.random((trials, n_sus, n_inf)) < beta_bar
    counts = (contacts & transmit).any(axis=2).sum(axis=1)
    observed = np.bincount(counts, minlength=n_sus + 1)
    expected = stats.binom.pmf(np.arange(n_sus + 1), n_sus, p_star) * trials
    keep = expected > 5.0
    merged_obs = np.concatenate((observed[keep], [observed[~keep].sum()]))
    merged_exp = np.concatenate((expected[keep], [expected[~keep].sum()]))
    result = stats.chisquare(merged_obs, merged_exp * merged_obs.sum() / merged_exp.sum())
    report(
        "aggregate infection probability vs brute-force contacts",
        result.pvalue > 0.01,
        f"chi-square p-value {result.pvalue:.3f}",
    )


def test_oracle_scheme_step_equals_walk_law():
    delta = 0.075
    grid = fdsolver.Grid(dx=0.01, lower=0.1, upper=0.1)
    coeffs = fdsolver.SchemeCoeffs.from_drift(delta)
    params = walk.WalkParams(
        dx=grid.dx, dt=1e-4, t_total=1e-4, delta=delta, w=grid.upper, lower=grid.lower
    )
    exact = True
    for start in (0.0, grid.upper - grid.dx, grid.upper):
        field = fdsolver.Field.delta_mass(grid, at=start)
        out = fdsolver.step_field(field, coeffs)
        expected = np.zeros(grid.n_points)
        origin = field.values[grid.index_of(start)]
        up = grid.index_of(walk.walk_step(start, params, 0.0))
        down = grid.index_of(walk.walk_step(start, params, 0.9999999))
        expected[up] += (0.5 + delta) * origin
        expected[down] += (0.5 - delta) * origin
        if not np.array_equal(out.values, expected):
            exact = False
    report("single-step scheme equals walk law exactly", exact)
