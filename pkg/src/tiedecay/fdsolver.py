"""Deterministic density evolution for the bounded biased walk.

Forward-time, central-difference scheme on the log-strength grid
``{-lower, ..., w - dx, w}``: the interior update is

    u_j' = a u_{j-1} + b u_j + c u_{j+1},

with ``a = k dt/dx^2 + 2 beta k dt/dx``, ``b = 1 - 2 k dt/dx^2`` and
``c = k dt/dx^2 - 2 beta k dt/dx``; under the lattice identification
``k = dx^2/(2 dt)``, ``beta = delta/dx`` these collapse to ``(1/2 + delta,
0, 1/2 - delta)`` and one field step is exactly the single-step law of the
walk.  Boundary rows redirect the outflowing mass back onto the end
points, so total probability is conserved to machine precision; the
stationary state of the resulting column-stochastic operator is geometric
with adjacent-site ratio ``(1/2 + delta)/(1/2 - delta)``.

An alternative ``flux`` top boundary closes the stationary flux relation
``u_N = u_{N-1} / (1 - 4 delta)`` instead; it agrees with the
mass-conserving rule to first order in ``delta`` but does not conserve
mass exactly, so it is kept behind a switch and excluded from the
transition-matrix form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .walk import WalkParams

BOUNDARY_MASS = "mass-conserving"
BOUNDARY_FLUX = "flux"

_GRID_RTOL = 1e-6
_MASS_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform grid from ``-lower`` to ``upper`` with spacing ``dx``."""

    dx: float
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.dx > 0.0:
            raise ValueError("dx must be positive")
        if not self.lower > 0.0:
            raise ValueError("lower cutoff magnitude must be positive")
        span = (self.upper + self.lower) / self.dx
        if abs(span - round(span)) > _GRID_RTOL * max(1.0, span):
            raise ValueError("grid span must be a whole number of dx steps")
        if round(span) < 2:
            raise ValueError("grid needs at least three points")

    @classmethod
    def for_walk(cls, params: WalkParams) -> "Grid":
        if params.w == math.inf:
            raise ValueError("grid requires a finite upper bound")
        if params.lower is None:
            raise ValueError("walk parameters carry no lower cutoff")
        return cls(params.dx, params.lower, params.w)

    @property
    def top(self) -> int:
        """Index of the last grid point."""
        return int(round((self.upper + self.lower) / self.dx))

    @property
    def n_points(self) -> int:
        return self.top + 1

    @property
    def x(self) -> np.ndarray:
        return -self.lower + np.arange(self.n_points) * self.dx

    def index_of(self, x0: float) -> int:
        j = (x0 + self.lower) / self.dx
        if abs(j - round(j)) > _GRID_RTOL * max(1.0, abs(j)):
            raise ValueError(f"x={x0} is not on the grid")
        j = int(round(j))
        if not 0 <= j <= self.top:
            raise ValueError(f"x={x0} is outside the grid")
        return j


@dataclass(frozen=True)
class SchemeCoeffs:
    """Explicit-scheme weights ``(a, b, c)`` for (left, center, right) donors."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if abs(self.a + self.b + self.c - 1.0) > 1e-12:
            raise ValueError("scheme weights must sum to 1")
        if min(self.a, self.b, self.c) < 0.0:
            raise ValueError(
                "negative scheme weight: the explicit scheme is unstable at "
                f"(a, b, c) = ({self.a}, {self.b}, {self.c})"
            )

    @classmethod
    def from_rates(cls, dx: float, dt: float, k: float, beta: float) -> "SchemeCoeffs":
        """Weights for diffusivity ``k`` and drift coefficient ``beta``."""
        r = k * dt / (dx * dx)
        d = 2.0 * beta * k * dt / dx
        return cls(r + d, 1.0 - 2.0 * r, r - d)

    @classmethod
    def from_drift(cls, delta: float) -> "SchemeCoeffs":
        """Weights under the lattice identification: ``(1/2+delta, 0, 1/2-delta)``."""
        if not 0.0 <= delta < 0.5:
            raise ValueError("drift bias must lie in [0, 1/2)")
        return cls(0.5 + delta, 0.0, 0.5 - delta)

    @property
    def drift(self) -> float:
        """Effective drift bias ``(a - c) / 2``."""
        return 0.5 * (self.a - self.c)


@dataclass
class Field:
    """Probability density on a grid; carries unit mass unless flagged."""

    grid: Grid
    values: np.ndarray
    step_index: int = 0
    check_mass: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.grid.n_points,):
            raise ValueError("field shape does not match the grid")
        if self.values.size and float(self.values.min()) < 0.0:
            raise ValueError("density values must be non-negative")
        if self.check_mass and abs(self.mass() - 1.0) > _MASS_TOL:
            raise ValueError(f"field mass {self.mass()!r} is not 1 within {_MASS_TOL}")

    def mass(self) -> float:
        return float(self.values.sum() * self.grid.dx)

    @classmethod
    def delta_mass(cls, grid: Grid, at: float = 0.0) -> "Field":
        """Unit point mass on the grid point nearest ``at``."""
        values = np.zeros(grid.n_points)
        values[grid.index_of(at)] = 1.0 / grid.dx
        return cls(grid, values)

    @classmethod
    def uniform(cls, grid: Grid) -> "Field":
        return cls(grid, np.full(grid.n_points, 1.0 / (grid.n_points * grid.dx)))


def step_field(u: Field, coeffs: SchemeCoeffs, boundary: str = BOUNDARY_MASS) -> Field:
    """Advance the density one time step.

    Interior points take ``a`` from the left neighbor, ``b`` from
    themselves and ``c`` from the right; the mass-conserving boundary rows
    keep the outflow on the end points, the flux variant instead pins the
    top value to ``u_{N-1} / (1 - 4 delta)`` after the interior update.
    """
    v = u.values
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    out = np.empty_like(v)
    out[1:-1] = a * v[:-2] + b * v[1:-1] + c * v[2:]
    out[0] = (b + c) * v[0] + c * v[1]
    if boundary == BOUNDARY_MASS:
        out[-1] = a * v[-2] + (a + b) * v[-1]
        return Field(u.grid, out, u.step_index + 1, check_mass=u.check_mass)
    if boundary == BOUNDARY_FLUX:
        denom = 1.0 - 4.0 * coeffs.drift
        if denom <= 0.0:
            raise ValueError("flux closure requires drift below 1/4")
        out[-1] = out[-2] / denom
        return Field(u.grid, out, u.step_index + 1, check_mass=False)
    raise ValueError(f"unknown boundary {boundary!r}")


@dataclass(frozen=True)
class TridiagonalOperator:
    """Tridiagonal matrix stored by bands; ``apply`` is the matrix action.

    ``sub[i]`` sits at row ``i+1``, column ``i``; ``sup[i]`` at row ``i``,
    column ``i+1``.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def apply(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[1:] += self.sub * v[:-1]
        out[:-1] += self.sup * v[1:]
        return out

    def column_sums(self) -> np.ndarray:
        sums = self.diag.copy()
        sums[:-1] += self.sub
        sums[1:] += self.sup
        return sums

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)


def build_transition_matrix(grid: Grid, coeffs: SchemeCoeffs) -> TridiagonalOperator:
    """Column-stochastic one-step operator of the mass-conserving scheme.

    Every column sums to 1 and the off-diagonal bands are strictly positive
    whenever the drift bias is below 1/2, so the unit eigenvalue is simple
    and its eigenvector is the stationary state.
    """
    if coeffs.a <= 0.0 or coeffs.c <= 0.0:
        raise ValueError(
            "transition matrix requires strictly positive hop weights "
            "(drift bias below 1/2)"
        )
    n = grid.n_points
    sub = np.full(n - 1, coeffs.a)
    sup = np.full(n - 1, coeffs.c)
    diag = np.full(n, coeffs.b)
    diag[0] = coeffs.b + coeffs.c
    diag[-1] = coeffs.a + coeffs.b
    return TridiagonalOperator(sub, diag, sup)


def stationary_state(
    operator: TridiagonalOperator,
    grid: Grid,
    tol: float = 1e-12,
    rel_tol: float = 1e-12,
    max_iterations: int = 500_000,
) -> Field:
    """Fixed point of the transition operator, normalized to unit mass.

    Power iteration on the half-lazy operator ``(M + I)/2`` (same fixed
    point, damps the period-2 mode that ``b = 0`` schemes carry).  The
    residual is measured on ``M`` itself, both in the sup norm and
    relative to each component, so the exponentially small tail of a
    drift-dominated profile converges in ratio and not just absolutely.
    """
    v = np.full(grid.n_points, 1.0 / (grid.n_points * grid.dx))
    check_every = 32
    residual = rel_residual = math.inf
    for it in range(1, max_iterations + 1):
        mv = operator.apply(v)
        v = 0.5 * (v + mv)
        v /= v.sum() * grid.dx
        if it % check_every == 0 or it == max_iterations:
            gap = np.abs(operator.apply(v) - v)
            residual = float(gap.max())
            rel_residual = float((gap / v).max())
            if residual <= tol and rel_residual <= rel_tol:
                return Field(grid, v, 0)
    raise NumericalError(
        f"stationary state did not converge within {max_iterations} iterations "
        f"(residual {residual:.3e}, relative residual {rel_residual:.3e})"
    )


def stationary_state_direct(operator: TridiagonalOperator, grid: Grid) -> Field:
    """Stationary state via a direct linear solve (dense; small grids).

    Solves ``(M - I) u = 0`` with one row replaced by the unit-mass
    constraint.  Alternative backend to the power iteration with the same
    contract.
    """
    n = grid.n_points
    system = operator.to_dense() - np.eye(n)
    system[-1, :] = grid.dx
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    u = np.linalg.solve(system, rhs)
    return Field(grid, np.maximum(u, 0.0), 0)


@dataclass(frozen=True)
class EvolveResult:
    field: Field
    max_mass_drift: float


def evolve(
    u0: Field,
    coeffs: SchemeCoeffs,
    steps: int,
    boundary: str = BOUNDARY_MASS,
    audit_every: int = 1,
) -> EvolveResult:
    """Time-march ``steps`` field updates, auditing total mass as it goes.

    ``max_mass_drift`` is the largest observed ``|mass - 1|`` over the
    audited steps (the final step is always audited).
    """
    if steps < 0:
        raise ValueError("step count must be non-negative")
    u = u0
    drift = abs(u.mass() - 1.0)
    for s in range(steps):
        u = step_field(u, coeffs, boundary)
        if audit_every and ((s + 1) % audit_every == 0 or s + 1 == steps):
            drift = max(drift, abs(u.mass() - 1.0))
    return EvolveResult(u, drift)
