"""Independent oracles and shared statistics helpers for the test suite.

Everything here is deliberately written from scratch against first
principles (breadth-first search, literal double sums, brute-force
enumeration) so the production implementations are checked against a
different route, never against themselves.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from tiedecay.graph import MODE_AT_LEAST, TieMatrix, components, threshold_edges
from tiedecay.seeding import substream


def bfs_component_sizes(n: int, edges) -> list[int]:
    """Breadth-first-search component census; oracle for the union-find."""
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in np.asarray(edges, dtype=np.int64).reshape(-1, 2):
        adjacency[int(a)].append(int(b))
        adjacency[int(b)].append(int(a))
    seen = [False] * n
    sizes = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        size = 0
        while queue:
            node = queue.popleft()
            size += 1
            for nxt in adjacency[node]:
                if not seen[nxt]:
                    seen[nxt] = True
                    queue.append(nxt)
        sizes.append(size)
    return sorted(sizes, reverse=True)


def double_sum_mean(p: float, alpha: float, t: int) -> float:
    """Literal O(t^2) evaluation of the truncated transient-mean sum."""
    sig = math.exp(-alpha)
    total = 0.0
    for i in range(1, t + 1):
        for j in range(0, t - i + 1):
            total += p**i * sig**j
    return total


def random_edge_list(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. Bernoulli(p) edges over all unordered pairs."""
    m = n * (n - 1) // 2
    flat = np.nonzero(rng.random(m) < p)[0]
    i, j = np.triu_indices(n, 1)
    return np.column_stack((i[flat], j[flat]))


def er_largest_fraction_mean(
    n: int, p: float, realizations: int, seed: int
) -> tuple[float, float]:
    """Mean (and standard error) largest-component fraction of G(n, p)."""
    fractions = np.empty(realizations)
    for r in range(realizations):
        rng = substream(seed, r)
        edges = random_edge_list(n, p, rng)
        fractions[r] = components(n, edges).largest_fraction
    sem = float(fractions.std(ddof=1) / math.sqrt(realizations)) if realizations > 1 else 0.0
    return float(fractions.mean()), sem


def crossing_location(x: np.ndarray, y: np.ndarray, level: float) -> float:
    """Abscissa where the piecewise-linear curve ``y(x)`` crosses ``level``.

    Scans for the first bracketing segment and linearly interpolates; the
    caller orders ``x`` so that ``y`` runs from above the level to below it.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if y[0] < level:
        raise ValueError("curve starts below the level; cannot bracket a crossing")
    for k in range(1, len(y)):
        if y[k] <= level:
            frac = (y[k - 1] - level) / (y[k - 1] - y[k])
            return float(x[k - 1] + frac * (x[k] - x[k - 1]))
    raise ValueError("curve never drops below the level")


def lattice_ks_statistic(
    samples: np.ndarray, model_cdf, cell_halfwidth: float
) -> float:
    """Kolmogorov-Smirnov distance against a lattice-discretized model CDF.

    The model distribution is binned onto the sample lattice (cells of
    half-width ``cell_halfwidth`` around each lattice point), so both CDFs
    are step functions jumping at the same points and the usual continuous
    critical values are conservative.
    """
    values, counts = np.unique(np.asarray(samples, dtype=np.float64), return_counts=True)
    empirical = np.cumsum(counts) / counts.sum()
    model = np.asarray(model_cdf(values + cell_halfwidth), dtype=np.float64)
    return float(np.max(np.abs(empirical - model)))


def ks_critical_value(n_samples: int, significance: float = 0.01) -> float:
    """Asymptotic one-sample KS critical value (1.628/sqrt(n) at 1%)."""
    coefficients = {0.10: 1.224, 0.05: 1.358, 0.01: 1.628}
    return coefficients[significance] / math.sqrt(n_samples)


def largest_fraction_at(params_n: int, strengths: np.ndarray, g: float) -> float:
    """Census helper: at-least threshold then largest-component fraction."""
    tm = TieMatrix(params_n, strengths)
    return components(params_n, threshold_edges(tm, g, MODE_AT_LEAST)).largest_fraction
