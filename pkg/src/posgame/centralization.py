"""Firm versus non-firm cost analysis under trade centralization.

A firm employing ``n1`` of the ``n = n1 + n2`` traders can merge its order
flow.  Naive centralization turns the competition into an ``n2 + 1``-trader
game; strategic centralization additionally misrepresents the firm's trader
count as ``n1 + delta``, turning it into an ``(n + delta)``-trader game while
the firm's target fraction stays fixed.  Every cost here is a group aggregate
built from the per-trader equilibrium cost formula, so the firm/non-firm
split always partitions the corresponding aggregate cost exactly.

The strategic cost curve E(delta) is minimized near the continuous optimum

    delta* = -n1 + sqrt(n2 (n2 + 1))

i.e. the optimal represented trader count is about the number of outside
traders, independent of both kappa and the firm's target fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NegativeKappa, RepresentationTooSmall
from .costs import aggregate_cost_limit


@dataclass(frozen=True)
class CentralizationScenario:
    """Firm split of a competition: firm/non-firm trader counts and fractions."""

    n1: int
    n2: int
    lambda_firm: float
    kappa: float

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError(f"need n1 >= 1 and n2 >= 1, got n1={self.n1}, n2={self.n2}")
        if not 0.0 < self.lambda_firm < 1.0:
            raise ValueError(f"need 0 < lambda_firm < 1, got {self.lambda_firm}")
        if self.kappa < 0.0:
            raise NegativeKappa(f"kappa = {self.kappa} must be non-negative")

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def lambda_nonfirm(self) -> float:
        return 1.0 - self.lambda_firm


@dataclass(frozen=True)
class CentralizationReport:
    """The four cost quadrants plus percent changes (in percent, not fractions).

    Percent changes are 100 * (central - no_central) / no_central, computed
    for the firm, the non-firm aggregate, and the total.
    """

    firm_cost_no_central: float
    nonfirm_cost_no_central: float
    firm_cost_central: float
    nonfirm_cost_central: float
    pct_change_firm: float
    pct_change_nonfirm: float
    pct_change_total: float

    @property
    def total_no_central(self) -> float:
        return self.firm_cost_no_central + self.nonfirm_cost_no_central

    @property
    def total_central(self) -> float:
        return self.firm_cost_central + self.nonfirm_cost_central


@dataclass(frozen=True)
class StrategicCurve:
    """Strategic-centralization cost curve over integer represented-count offsets.

    ``deltas`` holds the offsets, ``exact_costs`` the curve with the decay
    rate recomputed at each represented count, ``approx_costs`` the curve
    with the decay rate frozen at kappa.  ``continuous_opt`` is
    -n1 + sqrt(n2 (n2 + 1)); the integer argmin of the approximate curve is
    one of its two neighbors.
    """

    deltas: np.ndarray
    exact_costs: np.ndarray
    approx_costs: np.ndarray
    argmin_exact: int
    argmin_approx: int
    continuous_opt: float


def _alpha_at(total_traders, kappa):
    return kappa * (total_traders - 1.0) / (total_traders + 1.0)


def _group_cost(total_traders, group_count, group_lambda, kappa):
    """Aggregate equilibrium cost of a group holding ``group_count`` of the
    ``total_traders`` strategies and ``group_lambda`` of the quantity."""
    alpha = _alpha_at(total_traders, kappa)
    return (
        kappa
        * (group_lambda * total_traders - group_count)
        / (total_traders * -np.expm1(-kappa))
        + alpha * group_count / (total_traders * np.expm1(alpha))
        + group_count * kappa / (total_traders + 1.0)
    )


def _group_cost_frozen_decay(total_traders, group_count, group_lambda, kappa):
    """Same as :func:`_group_cost` with the decay rate frozen at kappa."""
    return (
        kappa
        * (group_lambda * total_traders - group_count)
        / (total_traders * -np.expm1(-kappa))
        + kappa * group_count / (total_traders * np.expm1(kappa))
        + group_count * kappa / (total_traders + 1.0)
    )


def firm_cost_no_centralization(sc: CentralizationScenario) -> float:
    """Aggregate cost of the n1 firm traders when everyone trades independently."""
    return float(_group_cost(sc.n, sc.n1, sc.lambda_firm, sc.kappa))


def nonfirm_cost_no_centralization(sc: CentralizationScenario) -> float:
    """Aggregate cost of the n2 outside traders without centralization."""
    return float(_group_cost(sc.n, sc.n2, sc.lambda_nonfirm, sc.kappa))


def firm_cost_centralized(sc: CentralizationScenario) -> float:
    """Firm cost after merging its flow into one trader of an (n2+1)-trader game."""
    return float(_group_cost(sc.n2 + 1, 1, sc.lambda_firm, sc.kappa))


def nonfirm_cost_centralized(sc: CentralizationScenario) -> float:
    """Outside traders' aggregate cost after the firm centralizes."""
    return float(_group_cost(sc.n2 + 1, sc.n2, sc.lambda_nonfirm, sc.kappa))


def naive_centralization_report(sc: CentralizationScenario) -> CentralizationReport:
    """All four cost quadrants with percent changes from centralizing."""
    f0 = firm_cost_no_centralization(sc)
    nf0 = nonfirm_cost_no_centralization(sc)
    f1 = firm_cost_centralized(sc)
    nf1 = nonfirm_cost_centralized(sc)
    return CentralizationReport(
        firm_cost_no_central=f0,
        nonfirm_cost_no_central=nf0,
        firm_cost_central=f1,
        nonfirm_cost_central=nf1,
        pct_change_firm=100.0 * (f1 - f0) / f0,
        pct_change_nonfirm=100.0 * (nf1 - nf0) / nf0,
        pct_change_total=100.0 * ((f1 + nf1) - (f0 + nf0)) / (f0 + nf0),
    )


def strategic_cost(sc: CentralizationScenario, delta: int) -> float:
    """Firm cost when centralizing and representing n1 + delta traders.

    delta = 0 recovers the independent-trading firm cost exactly, and
    delta = 1 - n1 recovers naive centralization exactly (same code path).
    As delta -> infinity the cost tends to kappa lambda_firm / (1 - e^{-kappa}).
    """
    if sc.n1 + delta < 1:
        raise RepresentationTooSmall(
            f"n1 + delta = {sc.n1 + delta} must be at least 1"
        )
    return float(_group_cost(sc.n + delta, sc.n1 + delta, sc.lambda_firm, sc.kappa))


def strategic_cost_approx(sc: CentralizationScenario, delta: int) -> float:
    """Frozen-decay approximation of :func:`strategic_cost` (accurate for
    large represented counts, where the decay rate is close to kappa)."""
    if sc.n1 + delta < 1:
        raise RepresentationTooSmall(
            f"n1 + delta = {sc.n1 + delta} must be at least 1"
        )
    return float(
        _group_cost_frozen_decay(sc.n + delta, sc.n1 + delta, sc.lambda_firm, sc.kappa)
    )


def continuous_optimal_delta(sc: CentralizationScenario) -> float:
    """Continuous minimizer of the approximate curve: -n1 + sqrt(n2 (n2 + 1))."""
    return -sc.n1 + math.sqrt(sc.n2 * (sc.n2 + 1.0))


def optimal_representation(
    sc: CentralizationScenario, delta_range: tuple[int, int] | None = None
) -> StrategicCurve:
    """Evaluate both strategic curves over a delta window and locate argmins.

    The default window runs from full consolidation (delta = 1 - n1) to well
    past the continuous optimum.
    """
    opt = continuous_optimal_delta(sc)
    if delta_range is None:
        lo = 1 - sc.n1
        hi = max(math.ceil(opt) + 50, lo + 10)
    else:
        lo, hi = delta_range
        if sc.n1 + lo < 1:
            raise RepresentationTooSmall(
                f"delta_range start {lo} gives n1 + delta = {sc.n1 + lo} < 1"
            )
        if hi < lo:
            raise ValueError(f"empty delta_range {delta_range}")
    deltas = np.arange(lo, hi + 1, dtype=int)
    exact = _group_cost(sc.n + deltas, sc.n1 + deltas, sc.lambda_firm, sc.kappa)
    approx = _group_cost_frozen_decay(
        sc.n + deltas, sc.n1 + deltas, sc.lambda_firm, sc.kappa
    )
    return StrategicCurve(
        deltas=deltas,
        exact_costs=exact,
        approx_costs=approx,
        argmin_exact=int(deltas[int(np.argmin(exact))]),
        argmin_approx=int(deltas[int(np.argmin(approx))]),
        continuous_opt=opt,
    )


def limiting_costs(sc: CentralizationScenario) -> tuple[float, float]:
    """Limits of firm and non-firm costs as the represented count grows without
    bound: each group pays its fraction of the many-trader aggregate."""
    total = aggregate_cost_limit(sc.kappa)
    return sc.lambda_firm * total, sc.lambda_nonfirm * total


# Reference rows of averaged centralization outcomes are labelled by the mean
# firm fraction of a uniform band of scenarios; these are the bands behind the
# standard row labels (label = band mean, shown to two decimals).
FRACTION_BANDS: dict[float, tuple[float, float]] = {
    0.07: (0.05, 0.10),
    0.15: (0.10, 0.20),
    0.40: (0.30, 0.50),
    0.62: (0.50, 0.75),
    0.82: (0.75, 0.90),
}


def _mean_report(reports: list[tuple[CentralizationReport, float]]) -> CentralizationReport:
    tot = sum(w for _, w in reports)
    acc = [0.0] * 7
    for rep, w in reports:
        vals = (
            rep.firm_cost_no_central,
            rep.nonfirm_cost_no_central,
            rep.firm_cost_central,
            rep.nonfirm_cost_central,
            rep.pct_change_firm,
            rep.pct_change_nonfirm,
            rep.pct_change_total,
        )
        for k, v in enumerate(vals):
            acc[k] += w * v
    acc = [v / tot for v in acc]
    return CentralizationReport(*acc)


def averaged_report(
    kappa: float,
    lambda_band: tuple[float, float],
    n_values: tuple[int, ...] = (20, 21, 22),
    n1_values: tuple[int, ...] = (3, 4, 5),
    quad_points: int = 64,
) -> CentralizationReport:
    """Deterministic scenario-grid average of centralization outcomes.

    Averages the report over every (n, n1) combination and over a uniform
    band of firm fractions, integrated by Gauss-Legendre quadrature so no
    RNG is involved.  Cost columns are affine in the firm fraction, so they
    equal the point value at the band mean; the percent columns are not, and
    the band average is what tabulated values reflect.
    """
    lo, hi = lambda_band
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    lams = 0.5 * (hi + lo) + 0.5 * (hi - lo) * nodes
    reports = []
    for n in n_values:
        for n1 in n1_values:
            for lam, w in zip(lams, weights):
                sc = CentralizationScenario(
                    n1=n1, n2=n - n1, lambda_firm=float(lam), kappa=kappa
                )
                reports.append((naive_centralization_report(sc), float(w)))
    return _mean_report(reports)


def sampled_report(
    kappa: float,
    lambda_band: tuple[float, float],
    n_values: tuple[int, ...] = (20, 21, 22),
    n1_values: tuple[int, ...] = (3, 4, 5),
    draws: int = 2000,
    rng: np.random.Generator | None = None,
) -> CentralizationReport:
    """Seeded-RNG variant of :func:`averaged_report` drawing (n, n1, fraction)
    uniformly; provided for fidelity to randomized reference runs."""
    if rng is None:
        rng = np.random.default_rng(0)
    lo, hi = lambda_band
    reports = []
    for _ in range(draws):
        n = int(rng.choice(n_values))
        n1 = int(rng.choice(n1_values))
        lam = float(rng.uniform(lo, hi))
        sc = CentralizationScenario(n1=n1, n2=n - n1, lambda_firm=lam, kappa=kappa)
        reports.append((naive_centralization_report(sc), 1.0))
    return _mean_report(reports)
