"""CSV ingestion and validation for funnel statistics and survey data.

Both readers are fail-fast: the first malformed or invariant-violating
row aborts ingestion with a line-numbered error, so no partial dataset
ever reaches the analysis layer.

Funnel schema:
    year,category,registered,submitted_to_court,convicted_persons,imprisoned_effective,synthetic_flag

Survey schema:
    respondent_id,component,wtp,currency,protest_flag
"""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path

from .errors import (
    CurrencyMismatchError,
    InvariantError,
    MissingColumnError,
    MissingFileError,
    ParseError,
)
from .funnel import CrimeCategory, FunnelRecord
from .valuation import NonUseKind, SurveyResponse

FUNNEL_COLUMNS = (
    "year",
    "category",
    "registered",
    "submitted_to_court",
    "convicted_persons",
    "imprisoned_effective",
    "synthetic_flag",
)

SURVEY_COLUMNS = ("respondent_id", "component", "wtp", "currency", "protest_flag")

# Value names excluded from non-use aggregation by construction.
_EXCLUDED_COMPONENT_NAMES = {"aesthetic", "spiritual", "social", "symbolic"}

_BOOL_VALUES = {
    "0": False, "false": False, "no": False,
    "1": True, "true": True, "yes": True,
}


def file_sha256(path: str | Path) -> str:
    """Hex digest of a file's bytes, for report provenance."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _open_csv(path: str | Path, required_columns: tuple[str, ...]) -> tuple[list[dict], str]:
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise MissingColumnError(f"{path}: file is empty, expected a header row")
        missing = [c for c in required_columns if c not in reader.fieldnames]
        if missing:
            raise MissingColumnError(
                f"{path}: missing column(s) {', '.join(missing)}; "
                f"expected header {','.join(required_columns)}"
            )
        rows = list(reader)
    return rows, str(path)


def _parse_int(value: str, column: str, where: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: column {column} is not an integer: {value!r}") from None


def _parse_float(value: str, column: str, where: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: column {column} is not a number: {value!r}") from None


def ingest_funnel_csv(path: str | Path) -> list[FunnelRecord]:
    """Read and validate justice-pipeline records.

    Rows violating structural invariants (negative counts, more cases
    submitted than registered, more imprisoned than convicted) are
    rejected with the offending line number.
    """
    rows, name = _open_csv(path, FUNNEL_COLUMNS)
    valid_categories = ", ".join(c.value for c in CrimeCategory)
    records = []
    for i, row in enumerate(rows):
        where = f"{name}:{i + 2}"  # 1-based, after the header line
        raw_category = (row["category"] or "").strip().lower()
        try:
            category = CrimeCategory(raw_category)
        except ValueError:
            raise ParseError(
                f"{where}: unknown category {row['category']!r}; "
                f"valid categories: {valid_categories}"
            ) from None
        counts = {
            column: _parse_int(row[column], column, where)
            for column in ("year", "registered", "submitted_to_court",
                           "convicted_persons", "imprisoned_effective")
        }
        _parse_int(row["synthetic_flag"], "synthetic_flag", where)
        try:
            records.append(FunnelRecord(category=category, **counts))
        except InvariantError as exc:
            raise InvariantError(f"{where}: {exc}") from None
    return records


def ingest_survey_csv(
    path: str | Path, expected_currency: str | None = None
) -> list[SurveyResponse]:
    """Read and validate contingent-valuation survey responses.

    All rows must share one currency (and match expected_currency when
    given); excluded value names such as "aesthetic" are rejected with an
    explanation rather than treated as unknown words.
    """
    rows, name = _open_csv(path, SURVEY_COLUMNS)
    legal_kinds = ", ".join(k.value for k in NonUseKind)
    responses = []
    seen_currency: str | None = None
    for i, row in enumerate(rows):
        where = f"{name}:{i + 2}"
        raw_kind = (row["component"] or "").strip().lower()
        if raw_kind in _EXCLUDED_COMPONENT_NAMES:
            raise ParseError(
                f"{where}: component {row['component']!r} is excluded from "
                "non-use value by design (it is part of direct use or would "
                f"double-count another component); legal kinds: {legal_kinds}"
            )
        try:
            kind = NonUseKind(raw_kind)
        except ValueError:
            raise ParseError(
                f"{where}: unknown component {row['component']!r}; "
                f"legal kinds: {legal_kinds}"
            ) from None

        wtp = _parse_float(row["wtp"], "wtp", where)
        if wtp < 0:
            raise InvariantError(f"{where}: wtp must be >= 0, got {wtp}")

        currency = (row["currency"] or "").strip().upper()
        if not currency:
            raise ParseError(f"{where}: currency must not be empty")
        if expected_currency is not None and currency != expected_currency.upper():
            raise CurrencyMismatchError(
                f"{where}: currency {currency} does not match run currency "
                f"{expected_currency.upper()}"
            )
        if seen_currency is None:
            seen_currency = currency
        elif currency != seen_currency:
            raise CurrencyMismatchError(
                f"{where}: mixed currencies in one survey "
                f"({seen_currency} and {currency}); convert before ingestion"
            )

        raw_flag = (row["protest_flag"] or "").strip().lower()
        if raw_flag not in _BOOL_VALUES:
            raise ParseError(
                f"{where}: protest_flag must be one of 0/1/true/false, "
                f"got {row['protest_flag']!r}"
            )
        responses.append(
            SurveyResponse(
                respondent_id=(row["respondent_id"] or "").strip(),
                component=kind,
                wtp=wtp,
                protest_flag=_BOOL_VALUES[raw_flag],
            )
        )
    return responses
