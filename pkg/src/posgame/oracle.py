"""Independent numerical verification of the closed forms.

The implementation-cost functional for trader i,

    Cost_i = integral of (m' + kappa m) lambda_i a_i' dt,   m = sum_j lambda_j a_j,

is discretized on a uniform grid with forward differences for the rates and
midpoint averaging for m on each interval.  The functional is then strictly
convex in trader i's interior values (the permanent-impact self-term
telescopes away, leaving the quadratic lambda_i^2 sum((a_i')^2) dt), so each
best response is one symmetric positive-definite tridiagonal solve.  A Nash
point is computed by cyclic (Gauss-Seidel-style) best-response sweeps; the
sweeps are under-relaxed when the coupling is strong enough to make the raw
iteration diverge, halving the relaxation factor until the sweep contracts.

Everything here deliberately avoids the closed-form solution: the only
shared inputs are the cost functional and the boundary conditions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solveh_banded

from .core import (
    BadBump,
    GameSpec,
    GridMismatch,
    NoConvergence,
    SampledPath,
    validate_spec,
)
from .equilibrium import solve

DIVERGENCE_LIMIT = 1e6
MIN_RELAXATION = 1.0 / 1024.0


@dataclass(frozen=True)
class DiscreteGame:
    """Sampled strategy profile on a shared uniform grid with pinned endpoints."""

    spec: GameSpec
    n_steps: int
    grid: np.ndarray
    paths: np.ndarray  # shape (n, n_steps + 1)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        paths = np.asarray(self.paths, dtype=float)
        if grid.shape != (self.n_steps + 1,):
            raise GridMismatch(f"grid shape {grid.shape} != ({self.n_steps + 1},)")
        if paths.shape != (self.spec.n, self.n_steps + 1):
            raise GridMismatch(
                f"paths shape {paths.shape} != ({self.spec.n}, {self.n_steps + 1})"
            )
        if np.any(paths[:, 0] != 0.0) or np.any(paths[:, -1] != 1.0):
            raise GridMismatch("path endpoints must be pinned to 0 and 1")
        grid = grid.copy()
        paths = paths.copy()
        grid.flags.writeable = False
        paths.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "paths", paths)

    def sampled_path(self, i: int) -> SampledPath:
        return SampledPath(grid=self.grid, values=self.paths[i])


def game_from_paths(spec: GameSpec, paths: np.ndarray) -> DiscreteGame:
    paths = np.asarray(paths, dtype=float)
    n_steps = paths.shape[1] - 1
    return DiscreteGame(
        spec=spec, n_steps=n_steps, grid=np.linspace(0.0, 1.0, n_steps + 1), paths=paths
    )


def sampled_equilibrium(spec: GameSpec, n_steps: int) -> DiscreteGame:
    """Closed-form strategies sampled on the oracle grid (for comparisons)."""
    grid = np.linspace(0.0, 1.0, n_steps + 1)
    sol = solve(spec)
    paths = np.vstack([s.position(grid) for s in sol.strategies])
    paths[:, 0] = 0.0
    paths[:, -1] = 1.0
    return DiscreteGame(spec=spec, n_steps=n_steps, grid=grid, paths=paths)


def _interval_pressure(m: np.ndarray, kappa: float, h: float) -> np.ndarray:
    """Per-interval price pressure: forward-difference rate plus kappa times
    the midpoint level of the aggregate path."""
    return np.diff(m) / h + kappa * 0.5 * (m[:-1] + m[1:])


def discrete_cost(game: DiscreteGame, i: int) -> float:
    """Discretized implementation cost of trader i on the shared grid."""
    lambdas = game.spec.lambdas_array()
    h = 1.0 / game.n_steps
    m = lambdas @ game.paths
    pressure = _interval_pressure(m, game.spec.kappa, h)
    return float(np.sum(pressure * lambdas[i] * np.diff(game.paths[i])))


def _best_response_values(
    lambdas: np.ndarray, kappa: float, paths: np.ndarray, i: int
) -> np.ndarray:
    """Core tridiagonal solve; see :func:`best_response`."""
    n_steps = paths.shape[1] - 1
    h = 1.0 / n_steps
    lam = lambdas[i]
    r = lambdas @ paths - lam * paths[i]
    g = (r[2:] - 2.0 * r[1:-1] + r[:-2]) + 0.5 * kappa * h * (r[2:] - r[:-2])
    # SPD banded form: diagonal 4 lam, off-diagonal -2 lam; a[N] = 1 moves to rhs.
    ab = np.empty((2, n_steps - 1))
    ab[0] = 4.0 * lam
    ab[1] = -2.0 * lam
    rhs = g.copy()
    rhs[-1] += 2.0 * lam
    interior = solveh_banded(ab, rhs, lower=True)
    values = np.empty(n_steps + 1)
    values[0] = 0.0
    values[-1] = 1.0
    values[1:-1] = interior
    return values


def best_response(game: DiscreteGame, i: int) -> SampledPath:
    """Interior-point minimizer of trader i's discrete cost, others fixed.

    Stationarity at interior node j reads

        2 lambda_i (a[j-1] - 2 a[j] + a[j+1])
            = -( r[j-1] - 2 r[j] + r[j+1] + (kappa h / 2)(r[j+1] - r[j-1]) )

    with r the opponents' aggregate, a tridiagonal SPD system.
    """
    lambdas = game.spec.lambdas_array()
    values = _best_response_values(lambdas, game.spec.kappa, game.paths, i)
    return SampledPath(grid=game.grid, values=values)


def nash_fixed_point(
    spec: GameSpec,
    n_steps: int,
    tol: float = 1e-8,
    max_iters: int = 10_000,
) -> DiscreteGame:
    """Iterate cyclic best responses from straight lines to a Nash point.

    Sweeps update traders in index order against the freshest profile; when a
    sweep blows up (strong-coupling divergence at high kappa), the update is
    restarted with a halved relaxation factor.  Converged paths match the
    sampled closed forms to the discretization error plus ``tol``.
    """
    validate_spec(spec)
    if n_steps < 2:
        raise ValueError(f"need n_steps >= 2, got {n_steps}")
    grid = np.linspace(0.0, 1.0, n_steps + 1)
    lambdas = spec.lambdas_array()
    relaxation = 1.0
    last_delta = float("inf")
    while relaxation >= MIN_RELAXATION:
        paths = np.tile(grid, (spec.n, 1))
        diverged = False
        for _sweep in range(max_iters):
            delta = 0.0
            for i in range(spec.n):
                new = _best_response_values(lambdas, spec.kappa, paths, i)
                if relaxation != 1.0:
                    new = (1.0 - relaxation) * paths[i] + relaxation * new
                step = float(np.max(np.abs(new - paths[i])))
                if not np.isfinite(step) or step > DIVERGENCE_LIMIT:
                    diverged = True
                    break
                delta = max(delta, step)
                paths[i] = new
            if diverged:
                break
            last_delta = delta
            if delta < tol:
                return DiscreteGame(spec=spec, n_steps=n_steps, grid=grid, paths=paths)
        if diverged:
            relaxation *= 0.5
            continue
        raise NoConvergence(max_iters, last_delta)
    raise NoConvergence(max_iters, last_delta)


def deviation_test(
    spec: GameSpec,
    i: int,
    bump: SampledPath,
    eps: float,
    base: DiscreteGame | None = None,
) -> float:
    """Cost change when trader i deviates by eps * bump off the closed form.

    All traders sit at the sampled closed-form equilibrium (or at ``base``
    when given); the return value is
    discrete_cost(a_i + eps * bump) - discrete_cost(a_i), which is
    non-negative (to rounding) for every endpoint-vanishing bump because the
    discrete cost is convex in the own path and stationary at its minimum.
    """
    if bump.values[0] != 0.0 or bump.values[-1] != 0.0:
        raise BadBump("bump must vanish at both endpoints")
    n_steps = bump.grid.size - 1
    base = base if base is not None else sampled_equilibrium(spec, n_steps)
    if not np.array_equal(base.grid, bump.grid):
        raise GridMismatch("bump grid must be the uniform oracle grid")
    perturbed = base.paths.copy()
    perturbed[i] = perturbed[i] + eps * bump.values
    bumped = DiscreteGame(spec=spec, n_steps=n_steps, grid=base.grid, paths=perturbed)
    return discrete_cost(bumped, i) - discrete_cost(base, i)


def standard_bumps(
    n_steps: int, modes: int = 5, n_random: int = 5, seed: int = 0
) -> list[SampledPath]:
    """Deviation directions: sine modes k = 1..modes plus seeded random
    endpoint-vanishing vectors (smooth and rough perturbations)."""
    grid = np.linspace(0.0, 1.0, n_steps + 1)
    bumps = []
    for k in range(1, modes + 1):
        values = np.sin(k * np.pi * grid)
        values[0] = 0.0
        values[-1] = 0.0
        bumps.append(SampledPath(grid=grid, values=values))
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        values = rng.standard_normal(n_steps + 1)
        values[0] = 0.0
        values[-1] = 0.0
        values /= max(1.0, float(np.max(np.abs(values))))
        bumps.append(SampledPath(grid=grid, values=values))
    return bumps
