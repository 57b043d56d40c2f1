"""Detection-risk analytics over the criminal-justice pipeline.

Each crime category runs through a funnel of stages per year:
registered -> submitted to court -> convicted persons -> effectively
imprisoned.  Detection risk is assigned by a threshold rubric over the
per-year stage means: categories with at least one effective imprisonment
per year carry the highest risk, conviction-only categories a tenth of
it, and inactive categories none.  The rubric is calibratable against a
target risk map by exhaustive grid search.

A bundled Bulgarian dataset for 2000-2013 ships with the package.  The
published source material gives only textual anchors (period endpoints of
registered counts, category shares, stage rates, and per-year conviction
and imprisonment levels), so intermediate yearly values are linearly
interpolated and flagged as synthetic; the totals series is encoded from
its own anchors and is deliberately not the column sum of the category
rows, whose published rates are mutually inconsistent with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from itertools import combinations_with_replacement, product
from pathlib import Path
from typing import Mapping, Sequence

from .errors import DomainError, EmptyCategoryError, InvariantError, RangeError


class CrimeCategory(Enum):
    """Heritage-crime categories of the Bulgarian Criminal Code, plus the
    bundled all-categories total."""

    ART208_TREASURE_SEARCH = "art208"
    ART277A_TREASURE_HUNTING = "art277a"
    ART278_CONCEALMENT = "art278"
    ART278A_EXPORT_TRADE = "art278a"
    ART278B_DAMAGE_DESTRUCTION = "art278b"
    TOTAL = "total"


@dataclass(frozen=True)
class FunnelRecord:
    """One category-year of justice-pipeline counts.

    convicted_persons may exceed submitted_to_court: a single submitted
    case can detain more than one person.
    """

    category: CrimeCategory
    year: int
    registered: int
    submitted_to_court: int
    convicted_persons: int
    imprisoned_effective: int

    def __post_init__(self):
        for name in ("registered", "submitted_to_court", "convicted_persons",
                     "imprisoned_effective"):
            if getattr(self, name) < 0:
                raise InvariantError(f"{name} must be >= 0")
        if self.submitted_to_court > self.registered:
            raise InvariantError(
                f"submitted_to_court ({self.submitted_to_court}) exceeds "
                f"registered ({self.registered})"
            )
        if self.imprisoned_effective > self.convicted_persons:
            raise InvariantError(
                f"imprisoned_effective ({self.imprisoned_effective}) exceeds "
                f"convicted_persons ({self.convicted_persons})"
            )


@dataclass(frozen=True)
class DetectionRubric:
    """Threshold rule mapping funnel activity to detention risk.

    Effective imprisonment carries the greatest weight: a category
    averaging at least imprisonment_threshold effective sentences per year
    gets p_if_imprisonment; otherwise sustained convictions get
    p_if_conviction_only; otherwise the category counts as inactive.
    """

    p_if_imprisonment: float = 0.01
    p_if_conviction_only: float = 0.001
    p_if_inactive: float = 0.0
    imprisonment_threshold: float = 1.0
    conviction_threshold: float = 1.0

    def __post_init__(self):
        for name in ("p_if_imprisonment", "p_if_conviction_only", "p_if_inactive"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise RangeError(f"{name} must be in [0, 1], got {p}")
        if not (self.p_if_inactive <= self.p_if_conviction_only
                <= self.p_if_imprisonment):
            raise InvariantError(
                "rubric must be ordered: p_if_inactive <= p_if_conviction_only "
                "<= p_if_imprisonment"
            )
        if self.imprisonment_threshold <= 0 or self.conviction_threshold <= 0:
            raise RangeError("rubric thresholds must be > 0")


@dataclass(frozen=True)
class StageRates:
    submission_rate: float
    convictions_per_year: float
    imprisonments_per_year: float


def _category_records(
    records: Sequence[FunnelRecord], category: CrimeCategory
) -> list[FunnelRecord]:
    subset = [r for r in records if r.category is category]
    if not subset:
        raise EmptyCategoryError(f"no records for category {category.value}")
    return subset


def stage_rates(
    records: Sequence[FunnelRecord], category: CrimeCategory
) -> StageRates:
    """Pooled submission rate and per-year means for one category."""
    subset = _category_records(records, category)
    total_registered = sum(r.registered for r in subset)
    if total_registered == 0:
        raise EmptyCategoryError(
            f"category {category.value} has no registered crimes"
        )
    n_years = len(subset)
    return StageRates(
        submission_rate=sum(r.submitted_to_court for r in subset) / total_registered,
        convictions_per_year=sum(r.convicted_persons for r in subset) / n_years,
        imprisonments_per_year=sum(r.imprisoned_effective for r in subset) / n_years,
    )


def detection_risk(
    records: Sequence[FunnelRecord],
    category: CrimeCategory,
    rubric: DetectionRubric = DetectionRubric(),
) -> float:
    """Detention risk implied by a category's funnel activity."""
    subset = _category_records(records, category)
    n_years = len(subset)
    mean_imprisoned = sum(r.imprisoned_effective for r in subset) / n_years
    mean_convicted = sum(r.convicted_persons for r in subset) / n_years
    if mean_imprisoned >= rubric.imprisonment_threshold:
        return rubric.p_if_imprisonment
    if mean_convicted >= rubric.conviction_threshold:
        return rubric.p_if_conviction_only
    return rubric.p_if_inactive


def registration_coverage(
    registered_per_year: float,
    active_offenders: float,
    crimes_per_offender: float,
) -> float:
    """Fraction of committed crimes that police registration captures:
    registered / (active_offenders * crimes_per_offender)."""
    if registered_per_year < 0:
        raise RangeError(
            f"registered_per_year must be >= 0, got {registered_per_year}"
        )
    if active_offenders <= 0 or crimes_per_offender <= 0:
        raise DomainError(
            "active_offenders and crimes_per_offender must both be > 0"
        )
    return registered_per_year / (active_offenders * crimes_per_offender)


# Calibration search space.
CALIBRATION_P_LEVELS = (0.0, 0.001, 0.01, 0.05)
CALIBRATION_THRESHOLDS = (1.0, 2.0, 5.0)


@dataclass(frozen=True)
class RubricCalibration:
    """Best rubric found by grid search plus its per-category mismatches."""

    rubric: DetectionRubric
    mismatch_count: int
    # category -> (target risk, risk under the fitted rubric), mismatches only
    mismatches: dict[CrimeCategory, tuple[float, float]]


def calibrate_rubric(
    records: Sequence[FunnelRecord],
    targets: Mapping[CrimeCategory, float],
) -> RubricCalibration:
    """Fit the rubric to target per-category risks by exhaustive grid search.

    Scans all ordered p-level triples over CALIBRATION_P_LEVELS and
    threshold pairs over CALIBRATION_THRESHOLDS, minimizing the number of
    categories whose rubric risk misses the target.  Ties break toward the
    default rubric; the best rubric is returned even when some targets are
    unattainable, with the residual mismatches reported.
    """
    if not targets:
        raise RangeError("calibration needs at least one category target")

    def score(rubric: DetectionRubric) -> tuple[int, dict]:
        mismatches = {}
        for category, target in targets.items():
            got = detection_risk(records, category, rubric)
            if got != target:
                mismatches[category] = (target, got)
        return len(mismatches), mismatches

    best_rubric = DetectionRubric()
    best_count, best_mismatches = score(best_rubric)
    for levels in combinations_with_replacement(CALIBRATION_P_LEVELS, 3):
        p_inactive, p_conviction, p_imprisonment = levels
        for thr_imp, thr_conv in product(CALIBRATION_THRESHOLDS, repeat=2):
            rubric = DetectionRubric(
                p_if_imprisonment=p_imprisonment,
                p_if_conviction_only=p_conviction,
                p_if_inactive=p_inactive,
                imprisonment_threshold=thr_imp,
                conviction_threshold=thr_conv,
            )
            count, mismatches = score(rubric)
            if count < best_count:
                best_rubric, best_count, best_mismatches = rubric, count, mismatches
    return RubricCalibration(
        rubric=best_rubric,
        mismatch_count=best_count,
        mismatches=best_mismatches,
    )


# --------------------------------------------------------------------------
# Bundled 2000-2013 dataset
# --------------------------------------------------------------------------

BUNDLED_DATASET_NAME = "bg_funnel_2000_2013.csv"

# Registered-crime anchors for the totals series: (first year, count at
# first year, last year, count at last year), linearly interpolated.
_TOTAL_REGISTERED_SPANS = ((2000, 368, 2006, 206), (2007, 130, 2013, 86))

# Category shares of total registered crimes.
_CATEGORY_SHARES = {
    CrimeCategory.ART208_TREASURE_SEARCH: 0.10,
    CrimeCategory.ART277A_TREASURE_HUNTING: 0.30,
    CrimeCategory.ART278_CONCEALMENT: 0.30,
    CrimeCategory.ART278A_EXPORT_TRADE: 0.15,
    CrimeCategory.ART278B_DAMAGE_DESTRUCTION: 0.15,
}

# Share of registered crimes submitted to court.
_SUBMISSION_RATES = {
    CrimeCategory.TOTAL: 0.60,
    CrimeCategory.ART208_TREASURE_SEARCH: 0.10,
    CrimeCategory.ART277A_TREASURE_HUNTING: 0.50,
    CrimeCategory.ART278_CONCEALMENT: 0.25,
    CrimeCategory.ART278A_EXPORT_TRADE: 0.50,
    CrimeCategory.ART278B_DAMAGE_DESTRUCTION: 0.0,
}

# Convicted persons and effective imprisonments per year (period-constant
# expert anchors; the 277a conviction level is the totals anchor minus the
# other categories, making it the largest single category as reported).
_CONVICTIONS_PER_YEAR = {
    CrimeCategory.TOTAL: 60,
    CrimeCategory.ART208_TREASURE_SEARCH: 1,
    CrimeCategory.ART277A_TREASURE_HUNTING: 39,
    CrimeCategory.ART278_CONCEALMENT: 14,
    CrimeCategory.ART278A_EXPORT_TRADE: 6,
    CrimeCategory.ART278B_DAMAGE_DESTRUCTION: 0,
}
_IMPRISONMENTS_PER_YEAR = {
    CrimeCategory.TOTAL: 1,
    CrimeCategory.ART208_TREASURE_SEARCH: 0,
    CrimeCategory.ART277A_TREASURE_HUNTING: 1,
    CrimeCategory.ART278_CONCEALMENT: 1,
    CrimeCategory.ART278A_EXPORT_TRADE: 0,
    CrimeCategory.ART278B_DAMAGE_DESTRUCTION: 0,
}

# Totals rows in these years carry registered counts straight from the
# source anchors; every other value in the file is derived and flagged
# synthetic.
_ANCHOR_YEARS = frozenset(
    year for first, _, last, _ in _TOTAL_REGISTERED_SPANS for year in (first, last)
)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _total_registered_by_year() -> dict[int, int]:
    out = {}
    for first_year, first_count, last_year, last_count in _TOTAL_REGISTERED_SPANS:
        span = last_year - first_year
        step = (last_count - first_count) / span
        for k in range(span + 1):
            out[first_year + k] = _round_half_up(first_count + step * k)
    return out


def _split_by_shares(total: int) -> dict[CrimeCategory, int]:
    # Largest-remainder apportionment keeps category counts summing to the
    # total exactly.
    raw = {cat: share * total for cat, share in _CATEGORY_SHARES.items()}
    counts = {cat: math.floor(v) for cat, v in raw.items()}
    leftover = total - sum(counts.values())
    by_remainder = sorted(
        _CATEGORY_SHARES, key=lambda cat: raw[cat] - counts[cat], reverse=True
    )
    for cat in by_remainder[:leftover]:
        counts[cat] += 1
    return counts


def bundled_records() -> list[FunnelRecord]:
    """Construct the bundled dataset rows (identical to the shipped CSV)."""
    records = []
    totals = _total_registered_by_year()
    for year in sorted(totals):
        split = _split_by_shares(totals[year])
        split[CrimeCategory.TOTAL] = totals[year]
        for category in CrimeCategory:
            registered = split[category]
            records.append(
                FunnelRecord(
                    category=category,
                    year=year,
                    registered=registered,
                    submitted_to_court=_round_half_up(
                        _SUBMISSION_RATES[category] * registered
                    ),
                    convicted_persons=_CONVICTIONS_PER_YEAR[category],
                    imprisoned_effective=_IMPRISONMENTS_PER_YEAR[category],
                )
            )
    return records


def is_synthetic(record: FunnelRecord) -> bool:
    """True when a bundled row's registered count is interpolated rather
    than a direct source anchor."""
    return not (
        record.category is CrimeCategory.TOTAL and record.year in _ANCHOR_YEARS
    )


def bundled_dataset_path() -> Path:
    """Filesystem path of the shipped funnel CSV."""
    return Path(str(resources.files("heritagecrime").joinpath("data", BUNDLED_DATASET_NAME)))
