"""Flat key=value run configuration.

A config file is plain text: one ``key = value`` per line, ``#`` starts a
comment line, unknown keys are rejected.  Every key has a default, so an
empty (or absent) file is a valid run; the full key table with defaults
and help text is exposed for the CLI's ``--help``.

Compound values use small inline notations:

    distribution   constant:1 | uniform:0,2 | lognormal:0,0.5 | logistic:1,0.3
    risk mix       riskneutral=0.5, crra(2)=0.3, reference(1,2)=0.2
    comparables    auction:5000000, insurance:8000000
    ledger streams restaurants:100, hotels:200
    number list    0,0.005,0.01
    risk targets   total=0.01, art208=0.001
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .crime_market import (
    DemandConstraint,
    Elasticities,
    EnforcementResponseParams,
    SupplyCurveParams,
)
from .econ_core import CRRA, OffenderProfile, ReferencePoint, RiskNeutral, UtilitySpec
from .errors import ConfigError, ToolkitError
from .funnel import CrimeCategory, DetectionRubric
from .microsim import Constant, DistSpec, Logistic, LogNormal, PopulationSpec, Uniform
from .scenario import ScenarioLevers
from .valuation import (
    Comparable,
    ComparableSource,
    DirectApproach,
    DirectValueInput,
    SecondaryActivityLedger,
    SecondaryStream,
)

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"expected a boolean (true/false), got {raw!r}")


def parse_dist(raw: str) -> DistSpec:
    """Parse a distribution spec like ``lognormal:0,0.5``."""
    name, _, arg_text = raw.strip().partition(":")
    args = [float(a) for a in arg_text.split(",")] if arg_text else []
    name = name.strip().lower()
    forms: dict[str, tuple[int, Callable[..., DistSpec]]] = {
        "constant": (1, Constant),
        "uniform": (2, Uniform),
        "lognormal": (2, LogNormal),
        "logistic": (2, Logistic),
    }
    if name not in forms:
        raise ValueError(
            f"unknown distribution {name!r}; expected one of {', '.join(forms)}"
        )
    arity, ctor = forms[name]
    if len(args) != arity:
        raise ValueError(f"{name} takes {arity} parameter(s), got {len(args)}")
    return ctor(*args)


def parse_utility(raw: str) -> UtilitySpec:
    """Parse a utility spec: riskneutral | crra(rho) | reference(ref,aversion)."""
    text = raw.strip().lower()
    if text == "riskneutral":
        return RiskNeutral()
    for prefix, ctor, arity in (("crra", CRRA, 1), ("reference", ReferencePoint, 2)):
        if text.startswith(prefix + "(") and text.endswith(")"):
            args = [float(a) for a in text[len(prefix) + 1:-1].split(",")]
            if len(args) != arity:
                raise ValueError(f"{prefix} takes {arity} parameter(s)")
            return ctor(*args)
    raise ValueError(
        f"unknown utility {raw!r}; expected riskneutral, crra(rho), "
        "or reference(ref_income,loss_aversion)"
    )


def parse_risk_mix(raw: str) -> tuple[tuple[UtilitySpec, float], ...]:
    # reference(1,2)=0.2 contains commas; re-join split fragments until
    # parentheses balance
    merged: list[str] = []
    for term in raw.split(","):
        if merged and merged[-1].count("(") > merged[-1].count(")"):
            merged[-1] += "," + term
        else:
            merged.append(term)
    out = []
    for term in merged:
        spec_text, sep, weight_text = term.rpartition("=")
        if not sep:
            raise ValueError(f"risk mix term {term.strip()!r} is missing '=weight'")
        out.append((parse_utility(spec_text), float(weight_text)))
    return tuple(out)


def _parse_tagged_amounts(raw: str, enum_cls, what: str) -> list[tuple]:
    """Parse ``name:amount, name:amount`` into (enum, float) pairs; names
    may repeat."""
    out = []
    if not raw.strip():
        return out
    valid = ", ".join(m.value for m in enum_cls)
    for term in raw.split(","):
        name, sep, amount = term.partition(":")
        if not sep:
            raise ValueError(f"{what} term {term.strip()!r} is missing ':amount'")
        try:
            key = enum_cls(name.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown {what} {name.strip()!r}; valid: {valid}"
            ) from None
        out.append((key, float(amount)))
    return out


def _amounts_to_streams(pairs: list[tuple]) -> dict:
    streams: dict = {}
    for key, amount in pairs:
        streams[key] = streams.get(key, 0.0) + amount
    return streams


def parse_float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(v) for v in raw.split(",") if v.strip())


def parse_targets(raw: str) -> dict[CrimeCategory, float]:
    out = {}
    valid = ", ".join(c.value for c in CrimeCategory)
    for term in raw.split(","):
        name, sep, value = term.partition("=")
        if not sep:
            raise ValueError(f"target term {term.strip()!r} is missing '=probability'")
        try:
            category = CrimeCategory(name.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown category {name.strip()!r}; valid: {valid}"
            ) from None
        out[category] = float(value)
    return out


@dataclass(frozen=True)
class ConfigKey:
    name: str
    default: str
    help: str


# Single source of truth for every config key.  name -> (default, help).
CONFIG_KEYS: tuple[ConfigKey, ...] = (
    ConfigKey("currency", "BGN", "currency code shared by all money values in the run"),
    ConfigKey("funnel_csv", "", "path to funnel statistics CSV; empty = bundled 2000-2013 dataset"),
    ConfigKey("survey_csv", "", "path to willingness-to-pay survey CSV; empty = no survey"),
    ConfigKey("out_dir", "out", "output directory for reports, tables, and figures"),
    ConfigKey("seed", "12345", "simulation seed (64-bit integer)"),
    ConfigKey("figures", "true", "render figures alongside tables (true/false)"),
    ConfigKey("rubric_p_imprisonment", "0.01", "detention risk of categories with effective imprisonments"),
    ConfigKey("rubric_p_conviction_only", "0.001", "detention risk of conviction-only categories"),
    ConfigKey("rubric_p_inactive", "0.0", "detention risk of inactive categories"),
    ConfigKey("rubric_imprisonment_threshold", "1", "mean imprisonments/year needed to count as imprisoning"),
    ConfigKey("rubric_conviction_threshold", "1", "mean convictions/year needed to count as convicting"),
    ConfigKey("coverage_registered_per_year", "368", "registered crimes per year for the coverage ratio"),
    ConfigKey("active_offenders", "5000", "estimated active offenders (treasure hunters)"),
    ConfigKey("crimes_per_offender", "10", "crimes per active offender per year (expert default)"),
    ConfigKey("direct_approach", "normative", "direct value approach: normative or market"),
    ConfigKey("direct_normative_cap", "2500", "normative ceiling on direct value, in run currency (statutory cap is 2500 EUR)"),
    ConfigKey("direct_comparables", "", "market comparables, e.g. auction:5000000, insurance:8000000"),
    ConfigKey("direct_combine", "max", "how to combine comparables: max, mean, or median"),
    ConfigKey("secondary_before", "", "secondary activity before exhibition, e.g. restaurants:100, hotels:200"),
    ConfigKey("secondary_during", "", "secondary activity during exhibition, same notation"),
    ConfigKey("survey_population", "1000", "population the mean willingness to pay scales to"),
    ConfigKey("survey_trim_fraction", "0.0", "upper-tail trim fraction for survey bids, in [0, 0.25]"),
    ConfigKey("gdp", "82e9", "annual GDP in run currency (default: Bulgaria 2013, levs)"),
    ConfigKey("tourism_share", "0.136", "tourism share of GDP"),
    ConfigKey("cultural_tourism_share", "0.12", "cultural tourism share of the tourism sector"),
    ConfigKey("supply_cpp_max", "0.5", "saturation level of the crime-supply curve (crimes per capita)"),
    ConfigKey("supply_slope", "1.0", "supply-curve responsiveness to net expected return"),
    ConfigKey("supply_midpoint", "0.0", "net return at half-saturation of the supply curve"),
    ConfigKey("market_crime_gain", "2.0", "aggregate profile: profit of a successful crime"),
    ConfigKey("market_legal_income", "1.0", "aggregate profile: income from the legal alternative"),
    ConfigKey("market_penalty", "1.0", "aggregate profile: monetized penalty level"),
    ConfigKey("demand_tolerable_at_zero_cost", "0.4", "crimes per capita society tolerates at zero enforcement spend"),
    ConfigKey("demand_marginal_damage", "50000", "money of damage per crime on the demand constraint"),
    ConfigKey("demand_elasticity", "1.0", "elasticity of demand of crimes"),
    ConfigKey("supply_elasticity", "1.0", "elasticity of supply of crimes"),
    ConfigKey("response_p_floor", "0.0", "detention probability at zero enforcement budget"),
    ConfigKey("response_p_max", "0.2", "cap on achievable detention probability"),
    ConfigKey("response_efficiency", "0.5", "detention probability gained per unit budget/damage ratio"),
    ConfigKey("market_tev_at_risk", "25000", "damage at stake for standalone market runs"),
    ConfigKey("market_imprisonment_increase", "10", "crime-equivalent imprisonment increase reported by the market section"),
    ConfigKey("pop_n_agents", "10000", "simulated population size"),
    ConfigKey("pop_wage_dist", "lognormal:0,0.5", "legal wage distribution"),
    ConfigKey("pop_crime_gain_dist", "lognormal:0.7,0.5", "crime gain distribution"),
    ConfigKey("pop_penalty_dist", "constant:1", "perceived penalty distribution"),
    ConfigKey("pop_risk_mix", "riskneutral=0.5, crra(2)=0.3, reference(1,2)=0.2", "utility mix with weights summing to 1"),
    ConfigKey("pop_p", "0.01", "detention probability faced by the simulated population"),
    ConfigKey("pop_lambda_active", "10", "mean crimes per committing agent per period"),
    ConfigKey("sweep_p_values", "0,0.005,0.01,0.02,0.05,0.1,0.2,0.5,1", "detention probabilities for the enforcement sweep"),
    ConfigKey("scenario_budget_enhanced", "200000", "extra enforcement budget of the enhanced alternative"),
    ConfigKey("scenario_budget_maximum", "1000000", "extra enforcement budget of the maximum alternative"),
    ConfigKey("scenario_redirect_enhanced", "0", "resources redirected from other crime types (enhanced)"),
    ConfigKey("scenario_redirect_maximum", "500000", "resources redirected from other crime types (maximum)"),
    ConfigKey("scenario_uplift_enhanced", "0", "tourism uplift credited to the enhanced alternative"),
    ConfigKey("scenario_uplift_maximum", "0", "tourism uplift credited to the maximum alternative"),
    ConfigKey("scenario_chosen", "0", "index of the chosen alternative (0 status quo, 1 enhanced, 2 maximum)"),
    ConfigKey(
        "calibrate_targets",
        "total=0.01, art208=0.001, art277a=0.01, art278=0.01, art278a=0.001, art278b=0",
        "target detention risks for rubric calibration",
    ),
)

_DEFAULTS = {k.name: k.default for k in CONFIG_KEYS}


def config_help_text() -> str:
    """Key table for the CLI help epilog."""
    lines = ["config keys (key = default):"]
    for key in CONFIG_KEYS:
        default = key.default if key.default != "" else "<empty>"
        lines.append(f"  {key.name} = {default}")
        lines.append(f"      {key.help}")
    return "\n".join(lines)


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a key=value file into a raw string map."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}", code="FILE_NOT_FOUND")
    raw: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key = key.strip()
        if key not in _DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        raw[key] = value.strip()
    return raw


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved, validated run configuration."""

    raw: dict[str, str] = field(repr=False)

    currency: str
    funnel_csv: Path | None
    survey_csv: Path | None
    out_dir: Path
    seed: int
    figures: bool

    rubric: DetectionRubric
    coverage_registered_per_year: float
    active_offenders: float
    crimes_per_offender: float

    direct_input: DirectValueInput
    direct_combine: str
    secondary_before: SecondaryActivityLedger
    secondary_during: SecondaryActivityLedger
    survey_population: int
    survey_trim_fraction: float

    gdp: float
    tourism_share: float
    cultural_tourism_share: float

    supply: SupplyCurveParams
    market_profile: OffenderProfile
    demand: DemandConstraint
    elasticities: Elasticities
    response: EnforcementResponseParams
    market_tev_at_risk: float
    market_imprisonment_increase: float

    population: PopulationSpec
    sweep_p_values: tuple[float, ...]

    scenario_levers: ScenarioLevers
    scenario_chosen: int
    calibrate_targets: dict[CrimeCategory, float]

    def effective(self) -> dict[str, str]:
        """Canonical key -> value map of the resolved configuration."""
        return dict(sorted(self.raw.items()))

    def config_hash(self) -> str:
        payload = "\n".join(f"{k}={v}" for k, v in self.effective().items())
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def resolve_config(
    path: str | Path | None = None,
    overrides: dict[str, str] | None = None,
) -> RunConfig:
    """Merge defaults, a config file, and CLI overrides into a RunConfig.

    All validation happens here, before any computation: a bad value
    raises ConfigError naming the key.
    """
    raw = dict(_DEFAULTS)
    if path is not None:
        raw.update(read_config_file(path))
    if overrides:
        for key, value in overrides.items():
            if key not in _DEFAULTS:
                raise ConfigError(f"unknown config key {key!r}")
            raw[key] = value

    def typed(key: str, parser: Callable):
        try:
            return parser(raw[key])
        except ToolkitError as exc:
            raise ConfigError(f"config key {key}: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"config key {key}: {exc}") from None

    comparables = tuple(
        Comparable(source=source, amount=amount)
        for source, amount in typed(
            "direct_comparables",
            lambda v: _parse_tagged_amounts(v, ComparableSource, "comparable source"),
        )
    )
    approach = typed(
        "direct_approach",
        lambda v: DirectApproach(v.strip().lower()),
    )
    combine = raw["direct_combine"].strip().lower()
    if combine not in ("max", "mean", "median"):
        raise ConfigError("config key direct_combine: must be max, mean, or median")

    try:
        rubric = DetectionRubric(
            p_if_imprisonment=typed("rubric_p_imprisonment", float),
            p_if_conviction_only=typed("rubric_p_conviction_only", float),
            p_if_inactive=typed("rubric_p_inactive", float),
            imprisonment_threshold=typed("rubric_imprisonment_threshold", float),
            conviction_threshold=typed("rubric_conviction_threshold", float),
        )
        supply = SupplyCurveParams(
            cpp_max=typed("supply_cpp_max", float),
            slope=typed("supply_slope", float),
            midpoint=typed("supply_midpoint", float),
        )
        market_profile = OffenderProfile(
            crime_gain=typed("market_crime_gain", float),
            legal_income=typed("market_legal_income", float),
            penalty=typed("market_penalty", float),
            detention_prob=typed("response_p_floor", float),
        )
        demand = DemandConstraint(
            tolerable_at_zero_cost=typed("demand_tolerable_at_zero_cost", float),
            marginal_damage=typed("demand_marginal_damage", float),
        )
        elasticities = Elasticities(
            demand=typed("demand_elasticity", float),
            supply=typed("supply_elasticity", float),
        )
        response = EnforcementResponseParams(
            p_floor=typed("response_p_floor", float),
            p_max=typed("response_p_max", float),
            efficiency=typed("response_efficiency", float),
        )
        population = PopulationSpec(
            n_agents=typed("pop_n_agents", int),
            wage_dist=typed("pop_wage_dist", parse_dist),
            crime_gain_dist=typed("pop_crime_gain_dist", parse_dist),
            penalty_perception_dist=typed("pop_penalty_dist", parse_dist),
            risk_mix=typed("pop_risk_mix", parse_risk_mix),
            p=typed("pop_p", float),
            lambda_active=typed("pop_lambda_active", float),
            seed=typed("seed", int),
        )
        levers = ScenarioLevers(
            budget_enhanced=typed("scenario_budget_enhanced", float),
            budget_maximum=typed("scenario_budget_maximum", float),
            redirect_enhanced=typed("scenario_redirect_enhanced", float),
            redirect_maximum=typed("scenario_redirect_maximum", float),
            uplift_enhanced=typed("scenario_uplift_enhanced", float),
            uplift_maximum=typed("scenario_uplift_maximum", float),
            active_offenders=typed("active_offenders", float),
            crimes_per_offender=typed("crimes_per_offender", float),
        )
        direct_input = DirectValueInput(
            approach=approach,
            normative_cap=typed("direct_normative_cap", float),
            comparables=comparables,
        )
    except ToolkitError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid configuration: {exc}") from None

    scenario_chosen = typed("scenario_chosen", int)
    if not (0 <= scenario_chosen <= 2):
        raise ConfigError("config key scenario_chosen: must be 0, 1, or 2")

    return RunConfig(
        raw=raw,
        currency=raw["currency"].strip().upper(),
        funnel_csv=Path(raw["funnel_csv"]) if raw["funnel_csv"].strip() else None,
        survey_csv=Path(raw["survey_csv"]) if raw["survey_csv"].strip() else None,
        out_dir=Path(raw["out_dir"]),
        seed=typed("seed", int),
        figures=typed("figures", _parse_bool),
        rubric=rubric,
        coverage_registered_per_year=typed("coverage_registered_per_year", float),
        active_offenders=typed("active_offenders", float),
        crimes_per_offender=typed("crimes_per_offender", float),
        direct_input=direct_input,
        direct_combine=combine,
        secondary_before=SecondaryActivityLedger(
            period_label="before",
            streams=_amounts_to_streams(typed(
                "secondary_before",
                lambda v: _parse_tagged_amounts(v, SecondaryStream, "secondary stream"),
            )),
        ),
        secondary_during=SecondaryActivityLedger(
            period_label="during",
            streams=_amounts_to_streams(typed(
                "secondary_during",
                lambda v: _parse_tagged_amounts(v, SecondaryStream, "secondary stream"),
            )),
        ),
        survey_population=typed("survey_population", int),
        survey_trim_fraction=typed("survey_trim_fraction", float),
        gdp=typed("gdp", float),
        tourism_share=typed("tourism_share", float),
        cultural_tourism_share=typed("cultural_tourism_share", float),
        supply=supply,
        market_profile=market_profile,
        demand=demand,
        elasticities=elasticities,
        response=response,
        market_tev_at_risk=typed("market_tev_at_risk", float),
        market_imprisonment_increase=typed("market_imprisonment_increase", float),
        population=population,
        sweep_p_values=typed("sweep_p_values", parse_float_list),
        scenario_levers=levers,
        scenario_chosen=scenario_chosen,
        calibrate_targets=typed("calibrate_targets", parse_targets),
    )
