"""Closed-form Nash equilibria for position-building in competition.

The package computes equilibrium trading strategies under temporary and
permanent (alpha-decay) market impact, their implementation costs and cost
shares, the price of anarchy, and the economics of naive and strategic trade
centralization.  Every closed form is cross-checked by an independent
discretized best-response oracle (:mod:`posgame.oracle`).
"""

__version__ = "0.1.0"

from .core import (
    Alpha,
    BadBump,
    ClosedFormStrategy,
    CostBreakdown,
    DegenerateAlpha,
    EmptyGame,
    EquilibriumSolution,
    GameSpec,
    GameSpecError,
    GridMismatch,
    GridTooSmall,
    LambdaCountMismatch,
    LambdaSumMismatch,
    NegativeKappa,
    NoConvergence,
    NonPositiveLambda,
    RepresentationTooSmall,
    SampledPath,
    renormalize_lambdas,
    validate_spec,
)
from .equilibrium import (
    compute_alpha,
    governing_residuals,
    market_residual,
    ode_residual,
    sample_strategy,
    solve,
    solve_equilibrium,
    solve_equilibrium_limit,
)
from .costs import (
    aggregate_cost,
    aggregate_cost_limit,
    cost_breakdown,
    cost_share,
    market_min_cost,
    price_of_anarchy,
    trader_cost,
)
from .centralization import (
    FRACTION_BANDS,
    CentralizationReport,
    CentralizationScenario,
    StrategicCurve,
    averaged_report,
    continuous_optimal_delta,
    firm_cost_centralized,
    firm_cost_no_centralization,
    limiting_costs,
    naive_centralization_report,
    nonfirm_cost_centralized,
    nonfirm_cost_no_centralization,
    optimal_representation,
    sampled_report,
    strategic_cost,
    strategic_cost_approx,
)
from .oracle import (
    DiscreteGame,
    best_response,
    deviation_test,
    discrete_cost,
    nash_fixed_point,
    sampled_equilibrium,
    standard_bumps,
)

__all__ = [
    "__version__",
    "Alpha",
    "BadBump",
    "CentralizationReport",
    "CentralizationScenario",
    "ClosedFormStrategy",
    "CostBreakdown",
    "DegenerateAlpha",
    "DiscreteGame",
    "EmptyGame",
    "EquilibriumSolution",
    "FRACTION_BANDS",
    "GameSpec",
    "GameSpecError",
    "GridMismatch",
    "GridTooSmall",
    "LambdaCountMismatch",
    "LambdaSumMismatch",
    "NegativeKappa",
    "NoConvergence",
    "NonPositiveLambda",
    "RepresentationTooSmall",
    "SampledPath",
    "StrategicCurve",
    "aggregate_cost",
    "aggregate_cost_limit",
    "averaged_report",
    "best_response",
    "compute_alpha",
    "continuous_optimal_delta",
    "cost_breakdown",
    "cost_share",
    "deviation_test",
    "discrete_cost",
    "firm_cost_centralized",
    "firm_cost_no_centralization",
    "governing_residuals",
    "limiting_costs",
    "market_min_cost",
    "market_residual",
    "naive_centralization_report",
    "nash_fixed_point",
    "nonfirm_cost_centralized",
    "nonfirm_cost_no_centralization",
    "ode_residual",
    "optimal_representation",
    "price_of_anarchy",
    "renormalize_lambdas",
    "sample_strategy",
    "sampled_equilibrium",
    "sampled_report",
    "solve",
    "solve_equilibrium",
    "solve_equilibrium_limit",
    "standard_bumps",
    "strategic_cost",
    "strategic_cost_approx",
    "trader_cost",
    "validate_spec",
]
