"""Aggregate crime supply, society's demand constraint, and comparative statics.

The supply side aggregates individual offender decisions into a logistic
curve of crimes per capita as a function of the net expected return of
crime.  The demand side is the downward-sloping line of crime society
tolerates at a given enforcement spend.  Equilibrium is the detention
probability at which the two meet, found by bisection.

Imprisonment comparative statics follow the elasticity rule

    crimes_reduced = demand_el * imprisonment_increase / (supply_el + demand_el)

so a zero-elastic supply gives the full incapacitation effect and an
infinitely elastic supply gives none (each removed offender is replaced).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .econ_core import OffenderProfile, net_expected_return
from .errors import DomainError, NoCrossingError, RangeError

EQUILIBRIUM_MAX_ITER = 200


def _logistic(x: float) -> float:
    # Overflow-safe standard logistic.
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


@dataclass(frozen=True)
class SupplyCurveParams:
    """Logistic crime-supply curve parameters.

    cpp_max   saturation level of crimes per capita (> 0)
    slope     responsiveness to net expected return (> 0)
    midpoint  net return at which supply reaches half of cpp_max
    """

    cpp_max: float
    slope: float
    midpoint: float = 0.0

    def __post_init__(self):
        if not (self.cpp_max > 0):
            raise RangeError(f"cpp_max must be > 0, got {self.cpp_max}")
        if not (self.slope > 0):
            raise RangeError(f"slope must be > 0, got {self.slope}")
        if not math.isfinite(self.midpoint):
            raise RangeError("midpoint must be finite")


@dataclass(frozen=True)
class DemandConstraint:
    """Socially tolerated crime level as a line in enforcement spend.

    tolerated(spend) = tolerable_at_zero_cost - spend / marginal_damage.
    The line is not floored at zero; configurations that drive it negative
    simply tolerate no crime before the budget runs out.
    """

    tolerable_at_zero_cost: float
    marginal_damage: float

    def __post_init__(self):
        if not (self.tolerable_at_zero_cost >= 0):
            raise RangeError(
                f"tolerable_at_zero_cost must be >= 0, got {self.tolerable_at_zero_cost}"
            )
        if not (self.marginal_damage > 0):
            raise RangeError(
                f"marginal_damage must be > 0, got {self.marginal_damage}"
            )

    def tolerated_level(self, enforcement_spend: float) -> float:
        if enforcement_spend < 0:
            raise RangeError("enforcement_spend must be >= 0")
        return self.tolerable_at_zero_cost - enforcement_spend / self.marginal_damage


@dataclass(frozen=True)
class Elasticities:
    """Demand and supply elasticities of crime (both >= 0, not both 0)."""

    demand: float
    supply: float

    def __post_init__(self):
        if self.demand < 0 or self.supply < 0:
            raise RangeError("elasticities must be >= 0")
        if self.demand + self.supply <= 0:
            raise RangeError("demand + supply elasticity must be > 0")


@dataclass(frozen=True)
class EnforcementResponseParams:
    """Map from enforcement spend (relative to damage at stake) to detention
    probability: p = clamp(p_floor + efficiency * budget / damage)."""

    p_floor: float = 0.0
    p_max: float = 1.0
    efficiency: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.p_floor <= self.p_max <= 1.0):
            raise RangeError(
                f"need 0 <= p_floor <= p_max <= 1, got ({self.p_floor}, {self.p_max})"
            )
        if not (self.efficiency > 0):
            raise RangeError(f"efficiency must be > 0, got {self.efficiency}")


def supply_cpp(params: SupplyCurveParams, profile: OffenderProfile) -> float:
    """Crimes per capita supplied by a population with the given aggregate
    offender profile.

    Logistic in the net expected return g of the profile:
    cpp_max / (1 + exp(-slope * (g - midpoint))).  Strictly increasing in
    crime_gain, strictly decreasing in detention_prob, penalty, and legal
    income (output may underflow to the 0/cpp_max bounds for extreme
    inputs).
    """
    g = net_expected_return(profile)
    return params.cpp_max * _logistic(params.slope * (g - params.midpoint))


def imprisonment_effect(el: Elasticities, imprisonment_increase: float) -> float:
    """Crimes reduced by an increase in imprisonment.

    imprisonment_increase is expressed in crime-equivalent units, i.e. the
    crimes the newly imprisoned offenders would have committed.  The result
    lies in [0, imprisonment_increase].
    """
    if imprisonment_increase < 0:
        raise RangeError(
            f"imprisonment_increase must be >= 0, got {imprisonment_increase}"
        )
    denom = el.supply + el.demand
    if denom <= 0:
        raise DomainError("supply + demand elasticity must be > 0")
    return el.demand * imprisonment_increase / denom


def enforcement_response(
    budget_allocated: float,
    tev_at_risk: float,
    params: EnforcementResponseParams,
) -> float:
    """Detention probability produced by an enforcement budget.

    Linear in the spend-to-damage ratio, clamped to [p_floor, p_max].
    """
    if tev_at_risk <= 0:
        raise DomainError(f"tev_at_risk must be > 0, got {tev_at_risk}")
    if budget_allocated < 0:
        raise RangeError(f"budget_allocated must be >= 0, got {budget_allocated}")
    p = params.p_floor + params.efficiency * (budget_allocated / tev_at_risk)
    return min(max(p, params.p_floor), params.p_max)


def required_budget(
    p: float, tev_at_risk: float, params: EnforcementResponseParams
) -> float:
    """Spend needed to reach detention probability p; inverse of
    enforcement_response on [p_floor, p_max]."""
    if tev_at_risk <= 0:
        raise DomainError(f"tev_at_risk must be > 0, got {tev_at_risk}")
    if not (params.p_floor <= p <= params.p_max):
        raise RangeError(f"p must be in [p_floor, p_max], got {p}")
    return (p - params.p_floor) / params.efficiency * tev_at_risk


@dataclass(frozen=True)
class EquilibriumResult:
    crime_level: float
    p_star: float
    residual: float


def solve_equilibrium(
    supply: SupplyCurveParams,
    demand: DemandConstraint,
    base_profile: OffenderProfile,
    response: EnforcementResponseParams,
    tev_at_risk: float,
) -> EquilibriumResult:
    """Find the detention probability where supplied crime meets the
    tolerated level.

    Supply is evaluated at the base profile with its detention probability
    replaced by the candidate p; the tolerated level is evaluated at the
    spend required to reach that p.  Bisection over [p_floor, p_max] runs
    until |supply - tolerated| < 1e-9 * cpp_max or 200 iterations, and the
    achieved residual is reported either way.

    Raises NoCrossingError when the two curves do not bracket a crossing
    on [p_floor, p_max].
    """
    tol = 1e-9 * supply.cpp_max

    def gap(p: float) -> float:
        crime = supply_cpp(supply, replace(base_profile, detention_prob=p))
        tolerated = demand.tolerated_level(required_budget(p, tev_at_risk, response))
        return crime - tolerated

    def result(p: float, g: float) -> EquilibriumResult:
        crime = supply_cpp(supply, replace(base_profile, detention_prob=p))
        return EquilibriumResult(crime_level=crime, p_star=p, residual=abs(g))

    lo, hi = response.p_floor, response.p_max
    g_lo, g_hi = gap(lo), gap(hi)
    # A flat configuration that already sits on the constraint is a valid
    # equilibrium at the cheapest enforcement level.
    if abs(g_lo) < tol:
        return result(lo, g_lo)
    if abs(g_hi) < tol:
        return result(hi, g_hi)
    if math.copysign(1.0, g_lo) == math.copysign(1.0, g_hi):
        raise NoCrossingError(
            "supply and tolerated level do not bracket a crossing on "
            f"[{lo}, {hi}] (gap {g_lo:.3g} at p_floor, {g_hi:.3g} at p_max)"
        )

    mid, g_mid = lo, g_lo
    for _ in range(EQUILIBRIUM_MAX_ITER):
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if abs(g_mid) < tol:
            break
        if math.copysign(1.0, g_mid) == math.copysign(1.0, g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return result(mid, g_mid)
