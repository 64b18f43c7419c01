"""Additive-boost tie-decay model.

Each unordered node pair evolves independently in discrete unit-time steps:
with probability ``p`` the pair interacts and its tie strength grows by 1,
otherwise the strength decays by the factor ``exp(-alpha)``.  The module
provides the per-edge update, full-network and marginal simulators, the
truncated-sum transient mean, stationary raw moments from the update's
moment recursion, a sparse-interaction approximation of the stationary
distribution, and the critical activity threshold it implies for the
emergence of a giant connected component.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .graph import MODE_AT_LEAST, TieMatrix, components, threshold_edges
from .seeding import substream

SPARSE_ARRIVAL_LIMIT = 0.1  # beyond this, the single-interaction assumption degrades


@dataclass(frozen=True)
class AdditiveParams:
    """Model parameters; the time step is fixed at 1, so ``alpha`` is per step."""

    n: int
    p: float
    alpha: float
    steps: int
    s0: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two nodes")
        if not 0.0 <= self.p < 1.0:
            raise ValueError("interaction probability must lie in [0, 1)")
        if not self.alpha > 0.0:
            raise ValueError("decay rate must be positive")
        if self.steps < 0:
            raise ValueError("step count must be non-negative")
        if self.s0 < 0.0:
            raise ValueError("initial strength must be non-negative")

    @property
    def sigma(self) -> float:
        return math.exp(-self.alpha)

    @property
    def n_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def arrival_mean(self) -> float:
        """Expected interactions per pair over the whole run."""
        return self.steps * self.p


def step_edge(s: float, interacted: bool, alpha: float) -> float:
    """One update of a single tie: +1 on interaction, decay otherwise."""
    if s < 0.0:
        raise ValueError("tie strength must be non-negative")
    return s + 1.0 if interacted else s * math.exp(-alpha)


def _run_edges(
    params: AdditiveParams, n_edges: int, rng: np.random.Generator, record_at=()
) -> tuple[np.ndarray, dict[int, tuple[float, float]]]:
    """Step ``n_edges`` independent ties; optionally record ensemble means.

    Buffers are reused across steps; single-precision uniforms are plenty
    for a Bernoulli(p) draw.
    """
    sig = params.sigma
    wanted = set(int(t) for t in record_at)
    records: dict[int, tuple[float, float]] = {}
    s = np.full(n_edges, float(params.s0))
    coins = np.empty(n_edges, dtype=np.float32)
    interact = np.empty(n_edges, dtype=bool)
    if 0 in wanted:
        records[0] = (float(s.mean()), 0.0)
    for t in range(1, params.steps + 1):
        rng.random(out=coins, dtype=np.float32)
        np.less(coins, params.p, out=interact)
        boosted = s[interact] + 1.0
        s *= sig
        s[interact] = boosted
        if t in wanted:
            sem = float(s.std(ddof=1) / math.sqrt(n_edges)) if n_edges > 1 else 0.0
            records[t] = (float(s.mean()), sem)
    return s, records


def simulate(params: AdditiveParams, seed: int) -> TieMatrix:
    """Full-network simulation: every pair stepped for ``params.steps``."""
    rng = substream(seed, 0)
    strengths, _ = _run_edges(params, params.n_pairs, rng)
    return TieMatrix(params.n, strengths)


@dataclass(frozen=True)
class EdgeEnsemble:
    """Marginal simulation of many i.i.d. ties from one edge's law."""

    strengths: np.ndarray
    records: dict[int, tuple[float, float]]  # step -> (mean, sem)


def simulate_edge_ensemble(
    params: AdditiveParams, n_samples: int, seed: int, record_at=()
) -> EdgeEnsemble:
    """Simulate ``n_samples`` independent ties, recording means at ``record_at``.

    Because pairs are independent and identically distributed, this is the
    exact law of any fixed edge in the full network.
    """
    rng = substream(seed, 0)
    strengths, records = _run_edges(params, n_samples, rng, record_at)
    return EdgeEnsemble(strengths, records)


def sample_final_strengths(
    params: AdditiveParams, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw final-time strengths directly, without stepping through time.

    The interaction count of a pair is binomial over the run and, given the
    count, the interaction steps are a uniform subset, so the end-of-run
    strength can be assembled exactly from the arrival pattern.  The cost
    scales with the number of interactions rather than with ``steps``,
    which makes sparse regimes (``steps * p`` small) cheap.
    """
    sig, big_t = params.sigma, params.steps
    counts = rng.binomial(big_t, params.p, size=n_samples)
    s = np.zeros(n_samples)
    if params.s0 > 0.0:
        s += params.s0 * sig ** (big_t - counts).astype(np.float64)
    single = np.nonzero(counts == 1)[0]
    if single.size:
        # decay steps after a lone interaction are uniform on 0..steps-1
        decays = rng.integers(0, big_t, size=single.size)
        s[single] += sig ** decays.astype(np.float64)
    for idx in np.nonzero(counts >= 2)[0]:
        k = int(counts[idx])
        at = np.sort(rng.choice(big_t, size=k, replace=False))
        decays = (big_t - 1 - at) - (k - 1 - np.arange(k))
        s[idx] += float(np.sum(sig ** decays.astype(np.float64)))
    return s


def mean_finite_time(params: AdditiveParams, t: int) -> float:
    """Truncated-sum approximation of the mean strength at step ``t``.

    Sums ``p^i * sigma^j`` over all ``i >= 1, j >= 0`` with ``i + j <= t``,
    with the inner geometric series closed.  Nondecreasing in ``t`` and
    bounded by ``mean_stationary``.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    sig = params.sigma
    total = 0.0
    p_pow = 1.0
    for i in range(1, t + 1):
        p_pow *= params.p
        if p_pow == 0.0:
            break
        total += p_pow * (1.0 - sig ** (t - i + 1))
    return total / (1.0 - sig)


def mean_stationary(p: float, alpha: float) -> float:
    """Long-time mean strength ``p / ((1 - sigma)(1 - p))``."""
    if not 0.0 <= p < 1.0:
        raise ValueError("no stationary state for p >= 1")
    if not alpha > 0.0:
        raise ValueError("no stationary state without decay")
    sig = math.exp(-alpha)
    return p / ((1.0 - sig) * (1.0 - p))


def variance_stationary(p: float, alpha: float) -> float:
    """Long-time variance ``p / ((1 - sigma^2)(1 - p)^2)``."""
    if not 0.0 <= p < 1.0:
        raise ValueError("no stationary state for p >= 1")
    if not alpha > 0.0:
        raise ValueError("no stationary state without decay")
    sig = math.exp(-alpha)
    return p / ((1.0 - sig * sig) * (1.0 - p) ** 2)


def raw_moments_stationary(p: float, alpha: float, n_max: int) -> list[float]:
    """Stationary raw moments ``m_1 .. m_n_max`` from the moment recursion.

    At stationarity the update implies
    ``m_n = p * sum_j C(n, j) m_{n-j} / ((1 - p)(1 - sigma^n))`` with
    ``m_0 = 1``; the first two reproduce the closed-form mean and variance.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("moment recursion needs 0 < p < 1")
    if not alpha > 0.0:
        raise ValueError("no stationary state without decay")
    if n_max < 1:
        raise ValueError("order must be at least 1")
    sig = math.exp(-alpha)
    m = [1.0]
    for order in range(1, n_max + 1):
        acc = sum(math.comb(order, j) * m[order - j] for j in range(1, order + 1))
        m.append(p * acc / ((1.0 - p) * (1.0 - sig**order)))
    return m[1:]


def poisson_cdf_approx(params: AdditiveParams, s_tilde: float) -> float:
    """Sparse-interaction approximation of ``P(s < s_tilde)`` at the final time.

    Treats interactions as a Poisson stream with mean ``steps * p`` and
    ignores the possibility of two or more arrivals, which is accurate for
    ``steps * p << 1``.  Below the one-arrival floor ``(s0 + 1) e^{-steps
    alpha}`` only the zero-arrival branch contributes.
    """
    lam = params.arrival_mean
    if lam > SPARSE_ARRIVAL_LIMIT:
        warnings.warn(
            f"steps*p = {lam:.3g} is too large for the single-arrival "
            "approximation to be reliable",
            stacklevel=2,
        )
    decay = math.exp(-params.steps * params.alpha)
    floor = params.s0 * decay
    if s_tilde <= floor:
        raise ValueError("threshold is below the pure-decay strength; log undefined")
    if s_tilde < (params.s0 + 1.0) * decay:
        return math.exp(-lam)
    log_term = params.steps * params.alpha + math.log(s_tilde - floor)
    value = math.exp(-lam) * (1.0 + (params.p / params.alpha) * log_term)
    return min(1.0, max(0.0, value))


def critical_threshold(params: AdditiveParams) -> float:
    """Activity threshold at which a giant component is predicted to appear.

    Inverts the sparse-interaction distribution at probability ``1 - 1/n``:
    thresholds below the returned value leave enough active edges for a
    giant component, thresholds above it do not.
    """
    if params.p <= 0.0:
        raise ValueError("critical threshold requires a positive interaction rate")
    if params.arrival_mean > SPARSE_ARRIVAL_LIMIT:
        warnings.warn(
            f"steps*p = {params.arrival_mean:.3g} is too large for the "
            "single-arrival approximation to be reliable",
            stacklevel=2,
        )
    exponent = (params.alpha / params.p) * (
        math.exp(params.steps * params.p) * (1.0 - 1.0 / params.n) - 1.0
    )
    ta = params.steps * params.alpha
    return math.exp(exponent - ta) + params.s0 * math.exp(-ta)


@dataclass(frozen=True)
class ThresholdSweepRow:
    g: float
    mean_fraction: float
    stderr: float


def gcc_sweep(
    params: AdditiveParams, thresholds, realizations: int, seed: int
) -> list[ThresholdSweepRow]:
    """Mean largest-component fraction versus activity threshold.

    Each realization draws a fresh network with ``sample_final_strengths``
    (one stream per realization index, so rows are deterministic for a
    fixed seed and every threshold sees the same networks), applies the
    at-least threshold, and runs the component census.
    """
    gs = [float(g) for g in thresholds]
    if realizations < 1:
        raise ValueError("need at least one realization")
    if not gs:
        return []
    fractions = np.empty((realizations, len(gs)))
    for r in range(realizations):
        rng = substream(seed, r)
        tm = TieMatrix(params.n, sample_final_strengths(params, params.n_pairs, rng))
        for gi, g in enumerate(gs):
            edges = threshold_edges(tm, g, MODE_AT_LEAST)
            fractions[r, gi] = components(params.n, edges).largest_fraction
    rows = []
    for gi, g in enumerate(gs):
        col = fractions[:, gi]
        sem = float(col.std(ddof=1) / math.sqrt(realizations)) if realizations > 1 else 0.0
        rows.append(ThresholdSweepRow(g, float(col.mean()), sem))
    return rows
