"""Multiplicative random-walk models of tie strength.

In log-strength coordinates ``x = ln(strength)`` each edge performs a
lattice walk: up ``dx`` with probability ``1/2 + delta`` and down ``dx``
with probability ``1/2 - delta`` every ``dt`` of time.  ``delta = 0`` is
pure diffusion, whose law converges to a spreading Gaussian; ``delta > 0``
adds drift toward a hard upper bound ``w`` where up-moves saturate, and
the walk then relaxes to an exponential stationary profile pinned at the
bound.  Walkers start at ``x = 0`` (strength 1) and positions always stay
on the lattice, so the bound is enforced exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seeding import substream

_GRID_RTOL = 1e-6


@dataclass(frozen=True)
class WalkParams:
    """Lattice-walk parameters.

    ``w`` is the log-strength upper bound (``math.inf`` disables it) and
    ``lower`` the magnitude of the solver's lower cutoff; with a finite
    propagation speed of one lattice site per step, simulated mass never
    reaches ``-lower`` as long as ``lower >= (dx/dt) * t_total``.
    """

    dx: float
    dt: float
    t_total: float
    delta: float = 0.0
    w: float = math.inf
    lower: float | None = None

    def __post_init__(self) -> None:
        if not self.dx > 0.0:
            raise ValueError("dx must be positive")
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if self.t_total < 0.0:
            raise ValueError("total time must be non-negative")
        if not 0.0 <= self.delta < 0.5:
            raise ValueError("drift bias must lie in [0, 1/2)")
        if self.w != math.inf:
            if not self.w > 0.0:
                raise ValueError("log-strength bound must be positive")
            ratio = self.w / self.dx
            if abs(ratio - round(ratio)) > _GRID_RTOL * max(1.0, ratio):
                raise ValueError("bound w must be a whole number of dx steps")
        if self.lower is not None and not self.lower > 0.0:
            raise ValueError("lower cutoff magnitude must be positive")

    @property
    def beta(self) -> float:
        """Drift coefficient ``delta / dx``."""
        return self.delta / self.dx

    @property
    def k(self) -> float:
        """Diffusion coefficient ``dx^2 / (2 dt)``."""
        return self.dx * self.dx / (2.0 * self.dt)

    @property
    def speed(self) -> float:
        """Propagation speed ``dx / dt`` of the lattice walk."""
        return self.dx / self.dt

    @property
    def steps(self) -> int:
        return int(round(self.t_total / self.dt))

    @property
    def top_index(self) -> int | None:
        """Lattice index of the bound, counted from the start at ``x = 0``."""
        if self.w == math.inf:
            return None
        return int(round(self.w / self.dx))


def walk_step(x: float, params: WalkParams, coin: float) -> float:
    """One lattice move from the grid point ``x``; ``coin`` is uniform on [0, 1).

    Moves up for ``coin < 1/2 + delta`` and down otherwise; an up-move that
    would meet or pass the bound lands exactly on ``w``, and a walker at
    ``w`` stays there on an up-coin.
    """
    j = x / params.dx
    if abs(j - round(j)) > _GRID_RTOL * max(1.0, abs(j)):
        raise ValueError(f"x={x} is not on the dx lattice")
    j = int(round(j))
    top = params.top_index
    if top is not None and j > top:
        raise ValueError("x is above the upper bound")
    if coin < 0.5 + params.delta:
        j += 1
        if top is not None and j > top:
            j = top
    else:
        j -= 1
    return j * params.dx


def simulate_walk_indices(
    params: WalkParams, n_edges: int, seed: int, start_index: int = 0
) -> np.ndarray:
    """Final lattice indices of ``n_edges`` independent walkers.

    Indices count ``dx`` steps from the start at ``x = 0``, so positions
    are exact integers and the bound clamp is exact.
    """
    top = params.top_index
    if top is not None and start_index > top:
        raise ValueError("start must not exceed the upper bound")
    rng = substream(seed, 0)
    j = np.full(n_edges, start_index, dtype=np.int64)
    _walk_inner(params, j, rng)
    return j


def _walk_inner(params: WalkParams, j: np.ndarray, rng: np.random.Generator) -> None:
    """Advance lattice indices ``j`` in place for ``params.steps`` moves."""
    up_p = 0.5 + params.delta
    top = params.top_index
    coins = np.empty(j.size, dtype=np.float32)
    up = np.empty(j.size, dtype=bool)
    for _ in range(params.steps):
        rng.random(out=coins, dtype=np.float32)
        np.less(coins, up_p, out=up)
        j += up
        j += up
        j -= 1
        if top is not None:
            np.minimum(j, top, out=j)


def simulate_walk(
    params: WalkParams, n_edges: int, seed: int, start_index: int = 0
) -> np.ndarray:
    """Final log strengths of ``n_edges`` independent walkers."""
    return simulate_walk_indices(params, n_edges, seed, start_index) * params.dx


def simulate_walk_trajectory(
    params: WalkParams, seed: int, start_index: int = 0
) -> np.ndarray:
    """Log-strength path of a single walker, including the start point."""
    top = params.top_index
    rng = substream(seed, 0)
    up_p = 0.5 + params.delta
    j = start_index
    path = np.empty(params.steps + 1, dtype=np.int64)
    path[0] = j
    coins = rng.random(params.steps)
    for t in range(params.steps):
        j += 1 if coins[t] < up_p else -1
        if top is not None and j > top:
            j = top
        path[t + 1] = j
    return path * params.dx


def gaussian_solution(x, t: float, diffusivity: float):
    """Spreading-Gaussian density of the unbounded, unbiased walk.

    ``(4 pi D t)^{-1/2} exp(-x^2 / (4 D t))`` for a unit point mass at 0.
    """
    if not t > 0.0:
        raise ValueError("time must be positive")
    if not diffusivity > 0.0:
        raise ValueError("diffusivity must be positive")
    x = np.asarray(x, dtype=np.float64)
    norm = 1.0 / math.sqrt(4.0 * math.pi * diffusivity * t)
    out = norm * np.exp(-(x * x) / (4.0 * diffusivity * t))
    return out if out.ndim else float(out)


def gaussian_cdf(x, t: float, diffusivity: float):
    """Cumulative form of ``gaussian_solution``."""
    if not t > 0.0:
        raise ValueError("time must be positive")
    if not diffusivity > 0.0:
        raise ValueError("diffusivity must be positive")
    x = np.asarray(x, dtype=np.float64)
    z = x / math.sqrt(4.0 * diffusivity * t)
    out = 0.5 * (1.0 + np.vectorize(math.erf)(z)) if x.ndim else 0.5 * (1.0 + math.erf(float(z)))
    return out


def stationary_density(x, beta: float, w: float):
    """Stationary log-strength density of the bounded biased walk.

    ``4 beta exp(4 beta (x - w))`` on ``x <= w``: unit mass, value
    ``4 beta`` at the bound.
    """
    if not beta > 0.0:
        raise ValueError("stationary profile requires positive drift")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x > w):
        raise ValueError("density is supported on x <= w")
    out = 4.0 * beta * np.exp(4.0 * beta * (x - w))
    return out if out.ndim else float(out)


def stationary_density_discrete(j, params: WalkParams):
    """Stationary lattice density ``j`` sites below the bound.

    Geometric profile ``u_top * eta^j`` with ``eta = (1/2 - delta)/(1/2 +
    delta)`` and boundary value ``u_top = 2 beta / (1/2 + delta)``; adjacent
    sites keep the exact ratio ``1/eta`` and ``u_top -> 4 beta`` as the
    lattice is refined.
    """
    if not params.delta > 0.0:
        raise ValueError("stationary profile requires positive drift")
    j = np.asarray(j)
    if np.any(j < 0):
        raise ValueError("offsets are counted from the bound and must be >= 0")
    eta = (0.5 - params.delta) / (0.5 + params.delta)
    u_top = 2.0 * params.beta / (0.5 + params.delta)
    out = u_top * eta ** j.astype(np.float64)
    return out if out.ndim else float(out)


def gcc_probability(beta: float, w: float, w0: float) -> float:
    """Stationary probability that a tie strength exceeds ``exp(w0)``.

    ``1 - exp(4 beta (w0 - w))``; a giant component is predicted when this
    exceeds ``1/n``.
    """
    if not beta > 0.0:
        raise ValueError("stationary profile requires positive drift")
    if w0 > w:
        raise ValueError("threshold must not exceed the bound")
    return 1.0 - math.exp(4.0 * beta * (w0 - w))


def no_gcc_delta_bound(n: int) -> float:
    """Largest drift bias compatible with having no giant component.

    With drift ``delta`` the lattice point at the bound carries stationary
    mass ``4 delta / (1 + 2 delta)``; keeping even the coarsest threshold
    (one site below the bound) subcritical requires that mass to stay below
    ``1/n``, i.e. ``delta < 1 / (4n - 2)``.  Necessary, not sufficient.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    return 1.0 / (4.0 * n - 2.0)


@dataclass(frozen=True)
class Timescales:
    tau_drift: float
    tau_diffusion: float
    tau: float
    peclet: float


def timescales(params: WalkParams) -> Timescales:
    """Characteristic relaxation times and the Peclet number.

    ``tau_drift = w / (4 beta k)`` is the time for the start configuration
    to drift to the bound; ``tau_diffusion = w^2 / (2k)`` the time to spread
    to standard deviation ``w``; stationarity is governed by the larger of
    the two, and ``tau = tau_diffusion`` exactly when ``Pe = 4 beta w >= 2``.
    """
    if not params.delta > 0.0:
        raise ValueError("timescales require positive drift")
    if params.w == math.inf:
        raise ValueError("timescales require a finite bound")
    beta, k, w = params.beta, params.k, params.w
    tau_drift = w / (4.0 * beta * k)
    tau_diffusion = w * w / (2.0 * k)
    return Timescales(
        tau_drift, tau_diffusion, max(tau_drift, tau_diffusion), 4.0 * beta * w
    )
