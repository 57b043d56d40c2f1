"""Counteraction alternatives and the opportunity cost of choosing one.

Three stylized policy alternatives are compared: keep counteraction as it
is, enhance it, or push it to the maximum by redirecting resources from
other crime types.  Each alternative is scored as

    net = crimes_averted * damage_per_crime + tourism_uplift
          - enforcement_budget - redirected_resource_cost

and the opportunity cost of a choice is the best net among the rejected
alternatives.  Because the source framing defines opportunity cost both
as the best rejected value and as the difference among alternatives, the
report carries the full pairwise net-difference matrix as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .crime_market import (
    Elasticities,
    EnforcementResponseParams,
    enforcement_response,
    imprisonment_effect,
)
from .errors import RangeError, TooFewAlternativesError


@dataclass(frozen=True)
class ScenarioAlternative:
    """Costs and benefits of one counteraction policy."""

    name: str
    enforcement_budget: float = 0.0
    redirected_resource_cost: float = 0.0
    expected_crimes_averted: float = 0.0
    tev_per_averted_crime: float = 0.0
    tourism_uplift: float = 0.0

    def __post_init__(self):
        for field_name in ("enforcement_budget", "redirected_resource_cost",
                           "expected_crimes_averted", "tev_per_averted_crime"):
            if getattr(self, field_name) < 0:
                raise RangeError(f"{field_name} must be >= 0")
        if not math.isfinite(self.tourism_uplift):
            raise RangeError("tourism_uplift must be finite")


@dataclass(frozen=True)
class AlternativeEvaluation:
    name: str
    benefits: float
    costs: float
    net: float


def evaluate_alternative(alt: ScenarioAlternative) -> AlternativeEvaluation:
    """Score one alternative: averted damage plus uplift against spend."""
    benefits = alt.expected_crimes_averted * alt.tev_per_averted_crime \
        + alt.tourism_uplift
    costs = alt.enforcement_budget + alt.redirected_resource_cost
    return AlternativeEvaluation(
        name=alt.name, benefits=benefits, costs=costs, net=benefits - costs
    )


@dataclass(frozen=True)
class NetBenefitReport:
    evaluations: tuple[AlternativeEvaluation, ...]
    ranking: tuple[int, ...]  # indices by net, best first, ties input order
    chosen_index: int
    opportunity_cost_of_chosen: float
    # net_differences[i][j] = net(i) - net(j)
    net_differences: tuple[tuple[float, ...], ...]
    chosen_is_dominated: bool


def opportunity_cost(
    alternatives: list[ScenarioAlternative], chosen_index: int
) -> NetBenefitReport:
    """Opportunity cost of choosing one alternative over the others.

    opportunity_cost_of_chosen is the maximum net among the rejected
    alternatives; the chosen one is flagged dominated when some rejected
    alternative nets strictly more.
    """
    if len(alternatives) < 2:
        raise TooFewAlternativesError(
            "opportunity cost needs at least 2 alternatives"
        )
    if not (0 <= chosen_index < len(alternatives)):
        raise RangeError(
            f"chosen_index {chosen_index} out of range for "
            f"{len(alternatives)} alternatives"
        )
    evaluations = tuple(evaluate_alternative(a) for a in alternatives)
    nets = [e.net for e in evaluations]
    ranking = tuple(sorted(range(len(nets)), key=lambda i: -nets[i]))
    oc = max(n for i, n in enumerate(nets) if i != chosen_index)
    diffs = tuple(tuple(a - b for b in nets) for a in nets)
    return NetBenefitReport(
        evaluations=evaluations,
        ranking=ranking,
        chosen_index=chosen_index,
        opportunity_cost_of_chosen=oc,
        net_differences=diffs,
        chosen_is_dominated=oc > nets[chosen_index],
    )


@dataclass(frozen=True)
class ScenarioLevers:
    """User-configured magnitudes of the enhanced and maximum alternatives."""

    budget_enhanced: float
    budget_maximum: float
    redirect_enhanced: float = 0.0
    redirect_maximum: float = 0.0
    uplift_enhanced: float = 0.0
    uplift_maximum: float = 0.0
    active_offenders: float = 5000.0
    crimes_per_offender: float = 10.0

    def __post_init__(self):
        for field_name in ("budget_enhanced", "budget_maximum",
                           "redirect_enhanced", "redirect_maximum"):
            if getattr(self, field_name) < 0:
                raise RangeError(f"{field_name} must be >= 0")
        if self.active_offenders <= 0 or self.crimes_per_offender <= 0:
            raise RangeError(
                "active_offenders and crimes_per_offender must be > 0"
            )


@dataclass(frozen=True)
class BuiltAlternatives:
    alternatives: list[ScenarioAlternative]
    # Every intermediate of the derivation, for audit.
    parameters: dict


def build_alternatives_from_model(
    elasticities: Elasticities,
    response: EnforcementResponseParams,
    tev_per_crime: float,
    baseline_p: float,
    levers: ScenarioLevers,
) -> BuiltAlternatives:
    """Wire the market, valuation, and funnel results into the three
    alternatives.

    The status quo spends nothing extra and averts nothing.  For the other
    two, the budget buys a detention-probability increase over baseline_p
    via the enforcement response (damage at stake is the per-crime TEV
    scaled to the annual crime volume), the probability increase converts
    to crime-equivalent incapacitation, and the elasticity rule converts
    that to crimes averted.
    """
    if tev_per_crime <= 0:
        raise RangeError(f"tev_per_crime must be > 0, got {tev_per_crime}")
    annual_crimes = levers.active_offenders * levers.crimes_per_offender
    tev_at_risk = tev_per_crime * annual_crimes
    resp = EnforcementResponseParams(
        p_floor=baseline_p, p_max=response.p_max, efficiency=response.efficiency
    )

    def averted(budget: float) -> tuple[float, float, float]:
        p_new = enforcement_response(budget, tev_at_risk, resp)
        delta_p = p_new - baseline_p
        incapacitation = delta_p * annual_crimes
        return p_new, incapacitation, imprisonment_effect(elasticities, incapacitation)

    p_enh, inc_enh, averted_enh = averted(levers.budget_enhanced)
    p_max_alt, inc_max, averted_max = averted(levers.budget_maximum)

    alternatives = [
        ScenarioAlternative(name="status_quo", tev_per_averted_crime=tev_per_crime),
        ScenarioAlternative(
            name="enhanced",
            enforcement_budget=levers.budget_enhanced,
            redirected_resource_cost=levers.redirect_enhanced,
            expected_crimes_averted=averted_enh,
            tev_per_averted_crime=tev_per_crime,
            tourism_uplift=levers.uplift_enhanced,
        ),
        ScenarioAlternative(
            name="maximum",
            enforcement_budget=levers.budget_maximum,
            redirected_resource_cost=levers.redirect_maximum,
            expected_crimes_averted=averted_max,
            tev_per_averted_crime=tev_per_crime,
            tourism_uplift=levers.uplift_maximum,
        ),
    ]
    parameters = {
        "baseline_p": baseline_p,
        "tev_per_crime": tev_per_crime,
        "annual_crimes": annual_crimes,
        "tev_at_risk": tev_at_risk,
        "demand_elasticity": elasticities.demand,
        "supply_elasticity": elasticities.supply,
        "response_efficiency": resp.efficiency,
        "response_p_max": resp.p_max,
        "p_enhanced": p_enh,
        "p_maximum": p_max_alt,
        "incapacitation_enhanced": inc_enh,
        "incapacitation_maximum": inc_max,
        "active_offenders": levers.active_offenders,
        "crimes_per_offender": levers.crimes_per_offender,
    }
    return BuiltAlternatives(alternatives=alternatives, parameters=parameters)
