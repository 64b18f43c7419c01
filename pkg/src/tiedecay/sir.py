"""SIR contagion on tie-decay interaction patterns.

Three views of the same epidemic: the deterministic discrete recursion for
a well-mixed population, a fixed-step RK4 integration of the continuous
model as a cross-check, and a stochastic population in which every
susceptible has an independent chance ``P`` of an active contact with each
infected individual per step (the stationary activity of the reset
tie-decay model).  With ``lambda = N P`` mean contacts per step, the
stochastic model tracks the recursion near ``lambda = 1``, outruns it for
``lambda > 1`` and lags it for ``lambda < 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import flat_to_pairs
from .seeding import substream


@dataclass(frozen=True)
class SirParams:
    """Per-step infection/recovery probabilities and the contact activity."""

    beta_bar: float
    gamma_bar: float
    n_pop: int
    p_active: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.beta_bar <= 1.0:
            raise ValueError("infection probability must lie in [0, 1]")
        if not 0.0 <= self.gamma_bar <= 1.0:
            raise ValueError("recovery probability must lie in [0, 1]")
        if self.n_pop < 2:
            raise ValueError("population must have at least two individuals")
        if not 0.0 <= self.p_active <= 1.0:
            raise ValueError("contact activity must lie in [0, 1]")

    @property
    def lam(self) -> float:
        """Mean active contacts per individual per step."""
        return self.n_pop * self.p_active

    @classmethod
    def from_lambda(
        cls, beta_bar: float, gamma_bar: float, n_pop: int, lam: float
    ) -> "SirParams":
        return cls(beta_bar, gamma_bar, n_pop, lam / n_pop)


@dataclass(frozen=True)
class SirTrajectory:
    """Compartment time series; one row per step (or per ``dt`` for the ODE)."""

    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    dt: float = 1.0

    def __post_init__(self) -> None:
        if not (self.s.shape == self.i.shape == self.r.shape):
            raise ValueError("compartment series must have equal length")

    @property
    def n_pop(self) -> float:
        return float(self.s[0] + self.i[0] + self.r[0])

    @property
    def peak_step(self) -> int:
        return int(np.argmax(self.i))

    @property
    def attack_rate(self) -> float:
        """Fraction of the population recovered by the end of the run."""
        return float(self.r[-1]) / self.n_pop


def sir_discrete_step(
    state: tuple[float, float, float], params: SirParams
) -> tuple[float, float, float]:
    """One step of the deterministic recursion.

    The infected compartment is closed as ``N - S - R`` so the population
    total is conserved exactly in floating point.
    """
    s, i, r = state
    new_inf = params.beta_bar * i * s / params.n_pop
    recovered = params.gamma_bar * i
    total = s + i + r
    s_next = s - new_inf
    r_next = r + recovered
    return s_next, total - s_next - r_next, r_next


def sir_discrete_trajectory(
    params: SirParams, initial: tuple[float, float, float], steps: int
) -> SirTrajectory:
    state = tuple(float(v) for v in initial)
    out = np.empty((steps + 1, 3))
    out[0] = state
    for t in range(steps):
        state = sir_discrete_step(state, params)
        out[t + 1] = state
    return SirTrajectory(out[:, 0], out[:, 1], out[:, 2])


def sir_ode_reference(
    params: SirParams,
    initial: tuple[float, float, float],
    t_end: float,
    dt_fine: float = 0.01,
) -> SirTrajectory:
    """Fixed-step RK4 integration of the continuous-time model.

    Integrates S and R and closes I as ``N - S - R``, so conservation is
    exact; meant as a qualitative cross-check of the discrete recursion.
    """
    if dt_fine > 0.01:
        raise ValueError("reference integrator requires dt <= 0.01")
    n_steps = int(round(t_end / dt_fine))
    n, bb, gb = params.n_pop, params.beta_bar, params.gamma_bar
    total = float(sum(initial))

    def derivs(s: float, r: float) -> tuple[float, float]:
        i = total - s - r
        return -bb * i * s / n, gb * i

    out = np.empty((n_steps + 1, 3))
    s, r = float(initial[0]), float(initial[2])
    out[0] = (s, total - s - r, r)
    for t in range(n_steps):
        k1s, k1r = derivs(s, r)
        k2s, k2r = derivs(s + 0.5 * dt_fine * k1s, r + 0.5 * dt_fine * k1r)
        k3s, k3r = derivs(s + 0.5 * dt_fine * k2s, r + 0.5 * dt_fine * k2r)
        k4s, k4r = derivs(s + dt_fine * k3s, r + dt_fine * k3r)
        s += dt_fine * (k1s + 2 * k2s + 2 * k3s + k4s) / 6.0
        r += dt_fine * (k1r + 2 * k2r + 2 * k3r + k4r) / 6.0
        out[t + 1] = (s, total - s - r, r)
    return SirTrajectory(out[:, 0], out[:, 1], out[:, 2], dt=dt_fine)


def infection_probability(p_active: float, beta_bar: float, n_infected: int) -> float:
    """Chance one susceptible is infected this step given ``n_infected``.

    Each infected individual independently makes an active contact with
    probability ``p_active`` and transmits on contact with ``beta_bar``;
    the per-susceptible aggregate is ``1 - (1 - p_active beta_bar)^I``.
    """
    if n_infected < 0:
        raise ValueError("infected count must be non-negative")
    return 1.0 - (1.0 - p_active * beta_bar) ** n_infected


def sir_tiedecay_step(
    state: tuple[int, int, int], params: SirParams, rng: np.random.Generator
) -> tuple[int, int, int]:
    """One synchronous stochastic step over annealed tie-decay contacts.

    Infection and recovery probabilities are computed from the start-of-step
    state; the independent per-susceptible Bernoulli draws aggregate to a
    binomial count.  An individual infected this step cannot recover in it.
    """
    s, i, r = (int(v) for v in state)
    p_inf = infection_probability(params.p_active, params.beta_bar, i)
    new_inf = int(rng.binomial(s, p_inf)) if s > 0 else 0
    recovered = int(rng.binomial(i, params.gamma_bar)) if i > 0 else 0
    return s - new_inf, i + new_inf - recovered, r + recovered


def sir_tiedecay_trajectory(
    params: SirParams, initial: tuple[int, int, int], steps: int, seed: int
) -> SirTrajectory:
    rng = substream(seed, 0)
    state = tuple(int(v) for v in initial)
    out = np.empty((steps + 1, 3), dtype=np.int64)
    out[0] = state
    for t in range(steps):
        state = sir_tiedecay_step(state, params, rng)
        out[t + 1] = state
    return SirTrajectory(out[:, 0], out[:, 1], out[:, 2])


def sir_quenched_trajectory(
    params: SirParams, initial: tuple[int, int, int], steps: int, seed: int
) -> SirTrajectory:
    """Extension mode: one fixed contact graph sampled from the activity law.

    The graph is drawn once (each pair active with probability
    ``p_active``) and kept for the whole epidemic; per step, a susceptible
    with ``k`` infected neighbors is infected with ``1 - (1 - beta_bar)^k``.
    """
    rng = substream(seed, 0)
    n = params.n_pop
    s0, i0, r0 = (int(v) for v in initial)
    if s0 + i0 + r0 != n:
        raise ValueError("initial compartments must sum to the population size")

    n_pairs = n * (n - 1) // 2
    n_active = int(rng.binomial(n_pairs, params.p_active))
    pairs = flat_to_pairs(n, rng.choice(n_pairs, size=n_active, replace=False))
    # adjacency in CSR-like form
    degrees = np.bincount(pairs.ravel(), minlength=n)
    offsets = np.concatenate(([0], np.cumsum(degrees)))
    neighbors = np.empty(2 * n_active, dtype=np.int64)
    cursor = offsets[:-1].copy()
    for a, b in pairs:
        neighbors[cursor[a]] = b
        cursor[a] += 1
        neighbors[cursor[b]] = a
        cursor[b] += 1

    status = np.zeros(n, dtype=np.int8)  # 0=S, 1=I, 2=R
    seeds = rng.choice(n, size=i0 + r0, replace=False)
    status[seeds[:i0]] = 1
    status[seeds[i0:]] = 2

    out = np.empty((steps + 1, 3), dtype=np.int64)
    out[0] = (s0, i0, r0)
    for t in range(steps):
        infected_nodes = np.nonzero(status == 1)[0]
        exposure = np.zeros(n, dtype=np.int64)
        for node in infected_nodes:
            exposure[neighbors[offsets[node] : offsets[node + 1]]] += 1
        susceptible = status == 0
        p_inf = 1.0 - (1.0 - params.beta_bar) ** exposure[susceptible]
        newly = rng.random(p_inf.size) < p_inf
        recovering = rng.random(infected_nodes.size) < params.gamma_bar
        status[np.nonzero(susceptible)[0][newly]] = 1
        status[infected_nodes[recovering]] = 2
        out[t + 1] = (
            int((status == 0).sum()),
            int((status == 1).sum()),
            int((status == 2).sum()),
        )
    return SirTrajectory(out[:, 0], out[:, 1], out[:, 2])


@dataclass(frozen=True)
class SirEnsemble:
    """Per-step ensemble mean and standard error for each compartment."""

    mean: np.ndarray  # shape (steps + 1, 3)
    sem: np.ndarray
    peak_steps: np.ndarray  # per-realization peak time of I
    attack_rates: np.ndarray  # per-realization final R / N

    @classmethod
    def from_runs(cls, runs: np.ndarray, n_pop: int) -> "SirEnsemble":
        realizations = runs.shape[0]
        sem = (
            runs.std(axis=0, ddof=1) / math.sqrt(realizations)
            if realizations > 1
            else np.zeros_like(runs[0])
        )
        return cls(
            runs.mean(axis=0),
            sem,
            runs[:, :, 1].argmax(axis=1),
            runs[:, -1, 2] / n_pop,
        )


def run_realization(
    params: SirParams,
    initial: tuple[int, int, int],
    steps: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """One stochastic trajectory as a (steps + 1, 3) array."""
    state = tuple(int(v) for v in initial)
    out = np.empty((steps + 1, 3))
    out[0] = state
    for t in range(steps):
        state = sir_tiedecay_step(state, params, rng)
        out[t + 1] = state
    return out


@dataclass(frozen=True)
class SirComparison:
    discrete: SirTrajectory
    ensembles: dict[float, SirEnsemble]


def sir_compare(
    lambdas,
    beta_bar: float,
    gamma_bar: float,
    n_pop: int,
    initial: tuple[int, int, int],
    steps: int,
    realizations: int,
    seed: int,
) -> SirComparison:
    """Ensembles of the stochastic model per lambda, plus the recursion."""
    discrete_params = SirParams.from_lambda(beta_bar, gamma_bar, n_pop, 1.0)
    discrete = sir_discrete_trajectory(discrete_params, initial, steps)
    ensembles: dict[float, SirEnsemble] = {}
    for li, lam in enumerate(lambdas):
        params = SirParams.from_lambda(beta_bar, gamma_bar, n_pop, float(lam))
        runs = np.stack(
            [
                run_realization(params, initial, steps, substream(seed, li, rlz))
                for rlz in range(realizations)
            ]
        )
        ensembles[float(lam)] = SirEnsemble.from_runs(runs, n_pop)
    return SirComparison(discrete, ensembles)
