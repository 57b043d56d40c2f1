"""Total economic value (TEV) of a cultural-historical or archaeological object.

TEV = direct value + additional monetary value from secondary activity
+ the five non-use components (existence, option, educational, prestige,
donation).  Aesthetic, spiritual, social, and symbolic values are *not*
non-use components here: they are either folded into direct use or would
double-count existing components, so the type system does not represent
them.

Non-use components are aggregated from contingent-valuation survey
responses: protest zeros are excluded and an optional upper-tail trim
guards against outlier bids.  All money amounts within one computation
must share a single currency; currency codes are checked at the I/O
boundary (see dataio).
"""

from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .errors import (
    DuplicateComponentError,
    EmptyComponentWarning,
    InvariantError,
    MissingEstimateWarning,
    NoComparablesError,
    RangeError,
)

DEFAULT_NORMATIVE_CAP_EUR = 2500.0


class DirectApproach(Enum):
    NORMATIVE = "normative"
    MARKET = "market"


class ComparableSource(Enum):
    AUCTION = "auction"
    INSURANCE = "insurance"
    BLACK_MARKET = "black_market"
    TICKET_REVENUE = "ticket_revenue"


@dataclass(frozen=True)
class Comparable:
    source: ComparableSource
    amount: float

    def __post_init__(self):
        if self.amount < 0:
            raise RangeError(f"comparable amount must be >= 0, got {self.amount}")


@dataclass(frozen=True)
class DirectValueInput:
    approach: DirectApproach
    normative_cap: float = DEFAULT_NORMATIVE_CAP_EUR
    comparables: tuple[Comparable, ...] = ()

    def __post_init__(self):
        if self.normative_cap < 0:
            raise RangeError("normative_cap must be >= 0")


def direct_value(inp: DirectValueInput, combine: str = "max") -> float:
    """Direct-use value of the object.

    Normative approach: the best available market estimate capped at the
    normative ceiling; with no comparables the cap itself is returned and a
    MissingEstimateWarning marks it as a bare upper bound.

    Market approach: combines the comparables, by default taking the
    maximum (replacement cost for society is the highest credible market
    realization); ``combine`` may be "max", "mean", or "median".
    """
    amounts = [c.amount for c in inp.comparables]
    if inp.approach is DirectApproach.NORMATIVE:
        if not amounts:
            warnings.warn(
                "normative direct value returned with no market estimate; "
                "treat the cap as an upper bound",
                MissingEstimateWarning,
                stacklevel=2,
            )
            return inp.normative_cap
        return min(_combine(amounts, combine), inp.normative_cap)
    if not amounts:
        raise NoComparablesError(
            "market approach to direct value requires at least one comparable"
        )
    return _combine(amounts, combine)


def _combine(amounts: Sequence[float], combine: str) -> float:
    if combine == "max":
        return max(amounts)
    if combine == "mean":
        return statistics.fmean(amounts)
    if combine == "median":
        return statistics.median(amounts)
    raise RangeError(f"combine must be max, mean, or median, got {combine!r}")


class SecondaryStream(Enum):
    RESTAURANTS = "restaurants"
    SOUVENIR_SHOPS = "souvenir_shops"
    HOTELS = "hotels"
    TRANSPORT = "transport"
    ADVERTISING = "advertising"


@dataclass(frozen=True)
class SecondaryActivityLedger:
    """Revenues of exhibition-driven secondary activity over one period."""

    period_label: str
    streams: Mapping[SecondaryStream, float] = field(default_factory=dict)

    def __post_init__(self):
        for stream, amount in self.streams.items():
            if amount < 0:
                raise RangeError(f"{stream.value} revenue must be >= 0, got {amount}")


def additional_monetary_value(
    before: SecondaryActivityLedger, during: SecondaryActivityLedger
) -> float:
    """Secondary-activity uplift: sum over streams of (during - before).

    Streams missing from either ledger default to zero, and a negative
    total is reported as-is (exhibition can coincide with decline).
    """
    keys = set(before.streams) | set(during.streams)
    return math.fsum(
        during.streams.get(k, 0.0) - before.streams.get(k, 0.0) for k in keys
    )


class NonUseKind(Enum):
    """The five admissible non-use value components.

    Aesthetic, spiritual, social, and symbolic values are intentionally
    not members: they belong to direct use or would double-count these.
    """

    EXISTENCE = "existence"
    OPTION = "option"
    EDUCATIONAL = "educational"
    PRESTIGE = "prestige"
    DONATION = "donation"


@dataclass(frozen=True)
class NonUseComponent:
    kind: NonUseKind
    amount: float
    # Scientific value is a tagged sub-amount of the educational component,
    # never added separately on top of it.
    scientific_subvalue: float | None = None

    def __post_init__(self):
        if self.amount < 0:
            raise RangeError(f"component amount must be >= 0, got {self.amount}")
        if self.scientific_subvalue is not None:
            if self.kind is not NonUseKind.EDUCATIONAL:
                raise InvariantError(
                    "scientific_subvalue is only valid on the educational component"
                )
            if not (0 <= self.scientific_subvalue <= self.amount):
                raise InvariantError(
                    "scientific_subvalue must lie in [0, amount]"
                )


@dataclass(frozen=True)
class SurveyResponse:
    """One contingent-valuation answer: willingness to pay for a component."""

    respondent_id: str
    component: NonUseKind
    wtp: float
    protest_flag: bool = False

    def __post_init__(self):
        if self.wtp < 0:
            raise RangeError(f"wtp must be >= 0, got {self.wtp}")


def aggregate_wtp(
    responses: Sequence[SurveyResponse],
    population: int,
    trim_fraction: float = 0.0,
) -> dict[NonUseKind, float]:
    """Aggregate survey willingness to pay into per-component money values.

    Per kind: protest-flagged responses are dropped, then the top
    ceil(n * trim_fraction) bids are trimmed as an outlier guard, and the
    mean of the remainder is scaled to the population.  Every kind appears
    in the result; kinds with no valid responses are 0 and emit an
    EmptyComponentWarning.
    """
    if population <= 0:
        raise RangeError(f"population must be > 0, got {population}")
    if not (0.0 <= trim_fraction <= 0.25):
        raise RangeError(f"trim_fraction must be in [0, 0.25], got {trim_fraction}")

    out: dict[NonUseKind, float] = {}
    for kind in NonUseKind:
        bids = sorted(
            r.wtp for r in responses if r.component is kind and not r.protest_flag
        )
        n_trim = math.ceil(len(bids) * trim_fraction)
        kept = bids[: len(bids) - n_trim] if n_trim else bids
        if not kept:
            warnings.warn(
                f"no valid willingness-to-pay responses for {kind.value}; "
                "component set to 0",
                EmptyComponentWarning,
                stacklevel=2,
            )
            out[kind] = 0.0
        else:
            out[kind] = (math.fsum(kept) / len(kept)) * population
    return out


@dataclass(frozen=True)
class TevBreakdown:
    """Total economic value and its exact decomposition."""

    direct: float
    additional: float
    indirect_components: tuple[NonUseComponent, ...]
    tev: float

    def __post_init__(self):
        kinds = [c.kind for c in self.indirect_components]
        if len(kinds) != len(set(kinds)):
            raise DuplicateComponentError(
                "at most one non-use component per kind is allowed"
            )
        expected = self.direct + self.additional + math.fsum(
            c.amount for c in self.indirect_components
        )
        if self.tev != expected:
            raise InvariantError("tev must equal the exact sum of its parts")

    @property
    def indirect_total(self) -> float:
        return math.fsum(c.amount for c in self.indirect_components)


def tev_total(
    direct: float,
    additional: float,
    components: Sequence[NonUseComponent],
) -> TevBreakdown:
    """Assemble the TEV breakdown; rejects duplicate component kinds."""
    components = tuple(components)
    kinds = [c.kind for c in components]
    if len(kinds) != len(set(kinds)):
        dupes = sorted({k.value for k in kinds if kinds.count(k) > 1})
        raise DuplicateComponentError(
            f"duplicate non-use component kind(s): {', '.join(dupes)}"
        )
    tev = direct + additional + math.fsum(c.amount for c in components)
    return TevBreakdown(
        direct=direct,
        additional=additional,
        indirect_components=components,
        tev=tev,
    )


def tourism_baseline(
    gdp: float, tourism_share: float, cultural_share_of_tourism: float
) -> float:
    """Annual cultural-tourism revenue implied by GDP and sector shares."""
    for name, share in (
        ("tourism_share", tourism_share),
        ("cultural_share_of_tourism", cultural_share_of_tourism),
    ):
        if not (0.0 <= share <= 1.0):
            raise RangeError(f"{name} must be in [0, 1], got {share}")
    return gdp * tourism_share * cultural_share_of_tourism
