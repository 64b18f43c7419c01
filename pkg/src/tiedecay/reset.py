"""Reset tie-decay model.

An interaction snaps the tie strength of a pair back to 1; between
interactions the strength decays by ``exp(-alpha)`` per step, so strengths
stay in ``[0, 1]`` forever.  Only the most recent interaction matters,
which gives exact closed forms: the stationary n-th moment, the
probability that a tie clears an activity threshold ``g``, and the critical
interaction probability at which a giant connected component appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import MODE_AT_LEAST, TieMatrix, components, threshold_edges
from .seeding import substream


def decay_steps_to_pass(alpha: float, g: float) -> int:
    """Number of idle steps after which a reset tie no longer clears ``g``.

    A tie is at least ``g`` exactly when the last interaction happened
    fewer than ``ceil(-ln(g)/alpha)`` steps ago.
    """
    if not 0.0 < g <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    if not alpha > 0.0:
        raise ValueError("decay rate must be positive")
    return int(math.ceil(-math.log(g) / alpha))


@dataclass(frozen=True)
class ResetParams:
    """Model parameters; unit time step, threshold ``g`` bundled in."""

    n: int
    p: float
    alpha: float
    steps: int
    g: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two nodes")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("interaction probability must lie in [0, 1]")
        if not self.alpha > 0.0:
            raise ValueError("decay rate must be positive")
        if self.steps < 0:
            raise ValueError("step count must be non-negative")
        if not 0.0 < self.g <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")

    @property
    def sigma(self) -> float:
        return math.exp(-self.alpha)

    @property
    def q(self) -> int:
        return decay_steps_to_pass(self.alpha, self.g)

    @property
    def n_pairs(self) -> int:
        return self.n * (self.n - 1) // 2


def step_edge(s: float, interacted: bool, alpha: float) -> float:
    """One update of a single tie: reset to 1 on interaction, decay otherwise."""
    if s < 0.0:
        raise ValueError("tie strength must be non-negative")
    if s > 1.0:
        raise ValueError("tie strength above 1 is unreachable in the reset model")
    return 1.0 if interacted else s * math.exp(-alpha)


def moment_stationary(p: float, alpha: float, order: int) -> float:
    """Stationary n-th raw moment ``p / (1 - sigma^n (1 - p))``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("interaction probability must lie in [0, 1]")
    if order < 1:
        raise ValueError("order must be at least 1")
    if p == 0.0 and alpha <= 0.0:
        raise ValueError("degenerate model: no interactions and no decay")
    if not alpha > 0.0:
        raise ValueError("decay rate must be positive")
    sig = math.exp(-alpha)
    return p / (1.0 - sig**order * (1.0 - p))


def prob_active(p: float, alpha: float, g: float) -> float:
    """Stationary probability that a tie strength is at least ``g``.

    Equals ``1 - (1-p)^q`` with ``q = ceil(-ln(g)/alpha)``: the tie clears
    the threshold iff at least one interaction fell in the last ``q``
    steps.  Piecewise constant in ``g`` with jumps at ``g = e^{-k alpha}``,
    and exactly 0 at ``g = 1``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("interaction probability must lie in [0, 1]")
    q = decay_steps_to_pass(alpha, g)
    return 1.0 - (1.0 - p) ** q


def gcc_predicted(n: int, p: float, alpha: float, g: float) -> bool:
    """Whether the stationary active-edge graph should have a giant component."""
    if n < 2:
        raise ValueError("need at least two nodes")
    return prob_active(p, alpha, g) > 1.0 / n


def critical_p(n: int, alpha: float, g: float) -> float:
    """Interaction probability at which the giant component appears.

    Exact inverse of ``prob_active`` at level ``1/n`` for the ``q`` value
    in force at ``g``: ``1 - (1 - 1/n)^{1/q}``.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    if not 0.0 < g < 1.0:
        raise ValueError("no finite critical probability at g = 1")
    q = decay_steps_to_pass(alpha, g)
    return 1.0 - (1.0 - 1.0 / n) ** (1.0 / q)


def critical_p_approx(n: int, alpha: float, g: float) -> float:
    """First-order convenience estimate ``1 / (n q)`` of ``critical_p``."""
    if n < 2:
        raise ValueError("need at least two nodes")
    if not 0.0 < g < 1.0:
        raise ValueError("no finite critical probability at g = 1")
    return 1.0 / (n * decay_steps_to_pass(alpha, g))


def _run_edges(
    params: ResetParams, n_edges: int, rng: np.random.Generator
) -> np.ndarray:
    sig = params.sigma
    s = np.zeros(n_edges)
    coins = np.empty(n_edges, dtype=np.float32)
    interact = np.empty(n_edges, dtype=bool)
    for _ in range(params.steps):
        rng.random(out=coins, dtype=np.float32)
        np.less(coins, params.p, out=interact)
        s *= sig
        s[interact] = 1.0
    return s


def simulate(params: ResetParams, seed: int) -> TieMatrix:
    """Full-network simulation from all-zero strengths."""
    rng = substream(seed, 0)
    return TieMatrix(params.n, _run_edges(params, params.n_pairs, rng))


def simulate_edge_ensemble(params: ResetParams, n_samples: int, seed: int) -> np.ndarray:
    """Marginal simulation: ``n_samples`` i.i.d. ties stepped through time."""
    rng = substream(seed, 0)
    return _run_edges(params, n_samples, rng)


def sample_final_strengths(
    params: ResetParams, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw final-time strengths directly from the last-interaction law.

    The strength after the run is ``sigma^J`` where ``J`` counts the steps
    since the most recent interaction (geometric), and 0 if no interaction
    occurred within the run.  O(1) per sample regardless of ``steps``.
    """
    if params.p == 0.0:
        return np.zeros(n_samples)
    j = rng.geometric(params.p, size=n_samples) - 1
    s = params.sigma ** j.astype(np.float64)
    s[j >= params.steps] = 0.0
    return s


@dataclass(frozen=True)
class ProbabilitySweepRow:
    p: float
    mean_fraction: float
    stderr: float


def gcc_sweep(
    params: ResetParams, p_grid, realizations: int, seed: int
) -> list[ProbabilitySweepRow]:
    """Mean largest-component fraction versus interaction probability.

    Thresholds with at-least semantics at ``params.g``; each (p, realization)
    cell gets its own stream, so the table is deterministic for a fixed seed.
    """
    ps = [float(p) for p in p_grid]
    if realizations < 1:
        raise ValueError("need at least one realization")
    rows = []
    for pi, p in enumerate(ps):
        run = ResetParams(params.n, p, params.alpha, params.steps, params.g)
        fractions = np.empty(realizations)
        for r in range(realizations):
            rng = substream(seed, pi, r)
            tm = TieMatrix(run.n, sample_final_strengths(run, run.n_pairs, rng))
            edges = threshold_edges(tm, run.g, MODE_AT_LEAST)
            fractions[r] = components(run.n, edges).largest_fraction
        sem = float(fractions.std(ddof=1) / math.sqrt(realizations)) if realizations > 1 else 0.0
        rows.append(ProbabilitySweepRow(p, float(fractions.mean()), sem))
    return rows
