"""Individual offender decision model and criminal-participation accounting.

An offender facing a detention probability compares the expected payoff of
a crime against a legal wage through a utility function:

    commit  iff  (1 - p) * U(crime_gain) - p * U(penalty) > U(legal_income)

Note the penalty enters as a subtracted disutility evaluated at the
monetized penalty level, not as a second income state; this is not the
standard two-state expected-utility form, but it is the decision rule this
toolkit implements throughout.

Aggregate participation accounting uses the identity

    crimes_per_capita = participation_rate * crimes_per_offender
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, InvariantError, RangeError

# CRRA utility diverges at zero income for curvature >= 1; incomes below
# this floor are clamped to it.
CRRA_INCOME_FLOOR = 1e-9

_CE_BISECTION_TOL = 1e-9


@dataclass(frozen=True)
class RiskNeutral:
    """Identity utility: U(x) = x."""


@dataclass(frozen=True)
class CRRA:
    """Constant relative risk aversion: U(x) = (x^(1-rho) - 1) / (1 - rho).

    Defined for x >= 0 only; rho must be positive and different from 1.
    Incomes below CRRA_INCOME_FLOOR are clamped to the floor so the
    rho >= 1 branch stays finite.
    """

    rho: float

    def __post_init__(self):
        if not (self.rho > 0):
            raise RangeError(f"CRRA rho must be > 0, got {self.rho}")
        if self.rho == 1:
            raise RangeError("CRRA rho must differ from 1 (log utility not supported)")


@dataclass(frozen=True)
class ReferencePoint:
    """Piecewise-linear utility kinked at a reference income.

    Slope is 1 above the reference and loss_aversion (>= 1) below it, so
    losses relative to the reference weigh at least as much as gains.
    """

    ref_income: float
    loss_aversion: float

    def __post_init__(self):
        if not (self.loss_aversion >= 1):
            raise RangeError(
                f"loss_aversion must be >= 1, got {self.loss_aversion}"
            )
        if not math.isfinite(self.ref_income):
            raise RangeError("ref_income must be finite")


UtilitySpec = Union[RiskNeutral, CRRA, ReferencePoint]


def utility_value(utility: UtilitySpec, x):
    """Evaluate U(x) for a scalar or numpy array of incomes.

    Raises DomainError when a CRRA utility is applied to a negative value.
    """
    arr = np.asarray(x, dtype=float)
    if isinstance(utility, RiskNeutral):
        out = arr
    elif isinstance(utility, CRRA):
        if np.any(arr < 0):
            raise DomainError("CRRA utility is undefined for negative income")
        clamped = np.maximum(arr, CRRA_INCOME_FLOOR)
        one_minus = 1.0 - utility.rho
        out = (np.power(clamped, one_minus) - 1.0) / one_minus
    elif isinstance(utility, ReferencePoint):
        gap = arr - utility.ref_income
        out = np.where(gap >= 0, gap, utility.loss_aversion * gap)
    else:
        raise TypeError(f"unknown utility spec: {utility!r}")
    if np.ndim(x) == 0:
        return float(out)
    return out


class Decision(Enum):
    COMMIT = "commit"
    ABSTAIN = "abstain"


@dataclass(frozen=True)
class OffenderProfile:
    """One offender's decision inputs.

    crime_gain      profit of a successful crime (money)
    legal_income    income from the legal alternative (money)
    penalty         level of punishment as monetized disutility, >= 0
    detention_prob  likelihood of being detained and punished, in [0, 1]
    """

    crime_gain: float
    legal_income: float
    penalty: float
    detention_prob: float

    def __post_init__(self):
        if not (0.0 <= self.detention_prob <= 1.0):
            raise RangeError(
                f"detention_prob must be in [0, 1], got {self.detention_prob}"
            )
        if not (self.penalty >= 0):
            raise RangeError(f"penalty must be >= 0, got {self.penalty}")
        if not (math.isfinite(self.crime_gain) and math.isfinite(self.legal_income)):
            raise RangeError("crime_gain and legal_income must be finite")


def decide_crime(profile: OffenderProfile, utility: UtilitySpec) -> Decision:
    """Apply the offender decision rule; ties go to ABSTAIN.

    COMMIT iff (1-p) * U(crime_gain) - p * U(penalty) > U(legal_income),
    with strict inequality.

    The rule is monotone deterrent in the detention probability only while
    U(crime_gain) + U(penalty) >= 0: because the penalty enters as a
    subtracted utility term rather than a second income state, a deeply
    negative U(penalty) (e.g. CRRA near zero income) makes higher p more
    attractive, not less.
    """
    p = profile.detention_prob
    expected = (1.0 - p) * utility_value(utility, profile.crime_gain) - p * utility_value(
        utility, profile.penalty
    )
    return Decision.COMMIT if expected > utility_value(utility, profile.legal_income) else Decision.ABSTAIN


def net_expected_return(profile: OffenderProfile) -> float:
    """Risk-neutral net return of crime over the legal job:
    (1-p) * crime_gain - p * penalty - legal_income."""
    p = profile.detention_prob
    return (1.0 - p) * profile.crime_gain - p * profile.penalty - profile.legal_income


@dataclass(frozen=True)
class ParticipationStats:
    """Crime activity decomposition: crimes_per_capita = rate * intensity."""

    crimes_per_capita: float
    participation_rate: float
    crimes_per_offender: float

    def __post_init__(self):
        expected = self.participation_rate * self.crimes_per_offender
        if not math.isclose(self.crimes_per_capita, expected, rel_tol=1e-12, abs_tol=1e-300):
            raise InvariantError(
                "crimes_per_capita must equal participation_rate * crimes_per_offender"
            )

    @property
    def implied_crimes_per_offender(self) -> float:
        """Recover the per-offender intensity from the other two fields."""
        if self.participation_rate <= 0:
            raise DomainError("intensity is undefined when participation_rate is 0")
        return self.crimes_per_capita / self.participation_rate


def participation_decompose(
    participation_rate: float, crimes_per_offender: float
) -> ParticipationStats:
    """Build ParticipationStats from a participation rate and an intensity."""
    if not (0.0 <= participation_rate <= 1.0):
        raise RangeError(
            f"participation_rate must be in [0, 1], got {participation_rate}"
        )
    if not (crimes_per_offender >= 0):
        raise RangeError(
            f"crimes_per_offender must be >= 0, got {crimes_per_offender}"
        )
    return ParticipationStats(
        crimes_per_capita=participation_rate * crimes_per_offender,
        participation_rate=participation_rate,
        crimes_per_offender=crimes_per_offender,
    )


def certainty_equivalent(
    utility: UtilitySpec, lottery: Sequence[tuple[float, float]]
) -> float:
    """Income x such that U(x) equals the expected utility of the lottery.

    The lottery is a sequence of (probability, outcome) pairs whose
    probabilities must sum to 1 within 1e-9.  RiskNeutral and CRRA invert
    in closed form; ReferencePoint is solved by bisection to 1e-9 absolute.
    """
    if not lottery:
        raise RangeError("lottery must contain at least one outcome")
    probs = [p for p, _ in lottery]
    outcomes = [x for _, x in lottery]
    if any(p < 0 for p in probs):
        raise RangeError("lottery probabilities must be non-negative")
    if abs(math.fsum(probs) - 1.0) > 1e-9:
        raise RangeError("lottery probabilities must sum to 1 within 1e-9")

    eu = math.fsum(p * utility_value(utility, x) for p, x in lottery)

    if isinstance(utility, RiskNeutral):
        return eu
    if isinstance(utility, CRRA):
        one_minus = 1.0 - utility.rho
        return float((one_minus * eu + 1.0) ** (1.0 / one_minus))

    # ReferencePoint: U is continuous and strictly increasing, so the
    # certainty equivalent lies between the extreme outcomes.
    lo, hi = min(outcomes), max(outcomes)
    if hi - lo <= _CE_BISECTION_TOL:
        return 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if utility_value(utility, mid) < eu:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _CE_BISECTION_TOL:
            break
    return 0.5 * (lo + hi)
