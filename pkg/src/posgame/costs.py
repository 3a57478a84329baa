"""Closed-form implementation costs in equilibrium.

All costs are in scaled units: total quantity 1, horizon [0, 1], temporary
impact coefficient normalized to 1.  Trader i's equilibrium cost is

    Cost_i = kappa (lambda_i n - 1) / (n (1 - e^{-kappa}))
           + alpha / (n (e^alpha - 1)) + kappa / (n + 1)

which sums over traders to an aggregate that is independent of how the target
quantity is split:

    Aggregate = alpha / (e^alpha - 1) + kappa n / (n + 1)

The centrally coordinated market-wide minimum is 1 + kappa/2 (straight-line
trading), so the price of anarchy stays below 2 for every n and kappa.
"""

from __future__ import annotations

import math

from .core import CostBreakdown, DegenerateAlpha, GameSpec, validate_spec
from .equilibrium import compute_alpha


def _require_generic(n: int, kappa: float) -> float:
    """Return alpha, raising DegenerateAlpha when the closed forms are singular."""
    if n < 2 or kappa <= 0.0:
        raise DegenerateAlpha(
            f"cost formulas need n >= 2 and kappa > 0, got n={n}, kappa={kappa}"
        )
    return compute_alpha(n, kappa).value


def trader_cost(spec: GameSpec, i: int) -> float:
    """Equilibrium implementation cost of trader i (0-based index).

    The kappa -> 0 limit of the formula is lambda_i, and the n = 1 value is
    1 + kappa/2; both degenerate cases raise DegenerateAlpha here and are
    served by :func:`cost_breakdown`, which owns the continuity extension.
    """
    validate_spec(spec)
    alpha = _require_generic(spec.n, spec.kappa)
    n, kappa = spec.n, spec.kappa
    lam = spec.lambdas[i]
    return (
        kappa * (lam * n - 1.0) / (n * -math.expm1(-kappa))
        + alpha / (n * math.expm1(alpha))
        + kappa / (n + 1)
    )


def aggregate_cost(n: int, kappa: float) -> float:
    """Total implementation cost over all traders; independent of the lambdas."""
    alpha = _require_generic(n, kappa)
    return alpha / math.expm1(alpha) + kappa * n / (n + 1)


def aggregate_cost_limit(kappa: float) -> float:
    """Aggregate cost in the many-trader limit: kappa / (1 - e^{-kappa})."""
    if kappa < 0.0:
        raise ValueError(f"need kappa >= 0, got {kappa}")
    if kappa == 0.0:
        return 1.0
    return kappa / -math.expm1(-kappa)


def market_min_cost(kappa: float) -> float:
    """Cost of the centrally minimized market-wide strategy m(t) = t."""
    if kappa < 0.0:
        raise ValueError(f"need kappa >= 0, got {kappa}")
    return 1.0 + kappa / 2.0


def price_of_anarchy(n, kappa: float) -> float:
    """Ratio of the non-cooperative aggregate cost to the market-wide minimum.

    ``n`` may be ``math.inf`` for the limiting ratio
    (kappa / (1 - e^{-kappa})) / (1 + kappa/2), which approaches 2 from below
    as kappa grows.
    """
    if kappa <= 0.0:
        raise ValueError(f"need kappa > 0, got {kappa}")
    if math.isinf(n):
        return aggregate_cost_limit(kappa) / market_min_cost(kappa)
    return aggregate_cost(int(n), kappa) / market_min_cost(kappa)


def cost_share(spec: GameSpec, i: int) -> float:
    """Trader i's fraction of the aggregate cost; affine in lambda_i.

    share_i = 1/n + T (1/n - lambda_i) with
    T = (n + 1)(e^alpha - 1) / ((1 - e^{-kappa})(1 - n e^alpha)),
    so an equal split pays exactly 1/n each and the shares always sum to one.
    """
    validate_spec(spec)
    alpha = _require_generic(spec.n, spec.kappa)
    n, kappa = spec.n, spec.kappa
    denom = 1.0 - n * math.exp(alpha)
    # 1 - n e^alpha < 0 for every n >= 2, alpha > 0: the share is well defined.
    assert denom < 0.0, f"degenerate share denominator {denom}"
    t_slope = (n + 1) * math.expm1(alpha) / (-math.expm1(-kappa) * denom)
    return 1.0 / n + t_slope * (1.0 / n - spec.lambdas[i])


def cost_breakdown(spec: GameSpec) -> CostBreakdown:
    """Per-trader costs, aggregate, shares and fair-share deviations.

    Degenerate specs take the continuous limits of the closed forms:
    kappa = 0 gives per-trader costs lambda_i (aggregate 1), and a single
    trader pays the market-wide minimum 1 + kappa/2.
    """
    validate_spec(spec)
    if spec.n == 1:
        total = market_min_cost(spec.kappa)
        return CostBreakdown(
            per_trader=(total,),
            aggregate=total,
            shares=(1.0,),
            fair_share_deviation=(0.0,),
        )
    if spec.kappa == 0.0:
        return CostBreakdown(
            per_trader=spec.lambdas,
            aggregate=1.0,
            shares=spec.lambdas,
            fair_share_deviation=(0.0,) * spec.n,
        )
    per = tuple(trader_cost(spec, i) for i in range(spec.n))
    total = aggregate_cost(spec.n, spec.kappa)
    shares = tuple(cost_share(spec, i) for i in range(spec.n))
    dev = tuple(s - lam for s, lam in zip(shares, spec.lambdas))
    return CostBreakdown(
        per_trader=per, aggregate=total, shares=shares, fair_share_deviation=dev
    )
