"""Tie-strength network state, edge thresholding, and component analysis.

A network over ``n`` nodes keeps one non-negative strength per unordered
node pair; only the upper triangle is stored, so symmetry holds by
construction and the diagonal is unrepresentable.  Thresholding the
strengths yields a plain graph whose connected components are counted with
a union-find census, and ``er_gcc_criterion`` classifies an edge-activity
probability against the ``1/n`` giant-component boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MODE_AT_LEAST = "at-least"
MODE_STRICTLY_ABOVE = "strictly-above"

SUPERCRITICAL = "supercritical"
CRITICAL = "critical"
SUBCRITICAL = "subcritical"


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, e: int, f: int) -> int:
    """Flat storage index of the unordered pair (e, f)."""
    if e == f:
        raise ValueError("self-pairs have no tie strength")
    if not (0 <= e < n and 0 <= f < n):
        raise ValueError(f"endpoints ({e}, {f}) out of range for n={n}")
    if e > f:
        e, f = f, e
    return e * (2 * n - e - 1) // 2 + (f - e - 1)


def flat_to_pairs(n: int, flat: np.ndarray) -> np.ndarray:
    """Invert ``pair_index``: map flat indices to an ``(m, 2)`` pair array."""
    k = np.asarray(flat, dtype=np.int64)
    if k.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    # Solve the row index from the quadratic pair layout, then repair the
    # rare off-by-one that float rounding can introduce.
    c = 2 * n - 1
    i = ((c - np.sqrt(c * c - 8.0 * k)) // 2).astype(np.int64)
    i = np.clip(i, 0, n - 2)
    row_start = i * (2 * n - i - 1) // 2
    i = np.where(row_start > k, i - 1, i)
    next_start = (i + 1) * (2 * n - i - 2) // 2
    i = np.where(k >= next_start, i + 1, i)
    row_start = i * (2 * n - i - 1) // 2
    j = k - row_start + i + 1
    return np.column_stack((i, j))


@dataclass(frozen=True)
class Threshold:
    """Tie-strength activity cutoff."""

    g: float

    def __post_init__(self) -> None:
        if not self.g >= 0.0:
            raise ValueError(f"threshold must be non-negative, got {self.g}")


@dataclass
class TieMatrix:
    """Symmetric non-negative tie strengths with an implicit zero diagonal.

    ``strengths`` is the flattened upper triangle in row-major pair order:
    pair ``(e, f)`` with ``e < f`` lives at ``e*(2n-e-1)//2 + (f-e-1)``.
    """

    n: int
    strengths: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("node count must be positive")
        self.strengths = np.asarray(self.strengths, dtype=np.float64)
        if self.strengths.shape != (pair_count(self.n),):
            raise ValueError(
                f"expected {pair_count(self.n)} pair strengths, got shape {self.strengths.shape}"
            )
        if self.strengths.size and float(self.strengths.min()) < 0.0:
            raise ValueError("tie strengths must be non-negative")

    @classmethod
    def zeros(cls, n: int) -> "TieMatrix":
        return cls(n, np.zeros(pair_count(n)))

    def get(self, e: int, f: int) -> float:
        return float(self.strengths[pair_index(self.n, e, f)])

    def set(self, e: int, f: int, value: float) -> None:
        if value < 0.0:
            raise ValueError("tie strengths must be non-negative")
        self.strengths[pair_index(self.n, e, f)] = value

    def pairs(self) -> np.ndarray:
        """All unordered pairs in storage order, as an ``(m, 2)`` array."""
        i, j = np.triu_indices(self.n, 1)
        return np.column_stack((i, j)).astype(np.int64)


@dataclass(frozen=True)
class ComponentReport:
    """Connected-component census of a thresholded network."""

    component_sizes: tuple[int, ...]  # sorted descending
    largest: int
    largest_fraction: float

    @classmethod
    def from_sizes(cls, n: int, sizes: list[int]) -> "ComponentReport":
        ordered = tuple(sorted(sizes, reverse=True))
        if sum(ordered) != n:
            raise ValueError("component sizes must sum to the node count")
        largest = ordered[0]
        return cls(ordered, largest, largest / n)


class UnionFind:
    """Disjoint sets over ``0..n-1`` with union by size and path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def component_sizes(self) -> list[int]:
        return [self.size[x] for x in range(len(self.parent)) if self.find(x) == x]


def threshold_edges(
    m: TieMatrix, t: Threshold | float, mode: str = MODE_AT_LEAST
) -> np.ndarray:
    """Active-edge list of ``m`` under cutoff ``t``, as an ``(k, 2)`` array.

    ``at-least`` keeps pairs with strength >= g; ``strictly-above`` keeps
    pairs with strength > g.
    """
    g = t.g if isinstance(t, Threshold) else float(Threshold(float(t)).g)
    if mode == MODE_AT_LEAST:
        flat = np.nonzero(m.strengths >= g)[0]
    elif mode == MODE_STRICTLY_ABOVE:
        flat = np.nonzero(m.strengths > g)[0]
    else:
        raise ValueError(f"unknown threshold mode {mode!r}")
    return flat_to_pairs(m.n, flat)


def components(n: int, edges) -> ComponentReport:
    """Census of the graph on ``0..n-1`` with the given undirected edges."""
    if n < 1:
        raise ValueError("node count must be positive")
    uf = UnionFind(n)
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size:
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("edges must be pairs")
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("edge endpoint out of range")
        for a, b in arr:
            uf.union(int(a), int(b))
    return ComponentReport.from_sizes(n, uf.component_sizes())


def er_gcc_criterion(n: int, p_active: float) -> str:
    """Classify an edge probability against the giant-component boundary.

    Exact comparison against ``1/n``: above it a giant component is
    expected, below it all components stay logarithmic in ``n``.
    """
    if n < 2:
        raise ValueError("criterion needs at least two nodes")
    if not 0.0 <= p_active <= 1.0:
        raise ValueError("p_active must lie in [0, 1]")
    boundary = 1.0 / n
    if p_active > boundary:
        return SUPERCRITICAL
    if p_active == boundary:
        return CRITICAL
    return SUBCRITICAL
