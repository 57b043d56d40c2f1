"""Run orchestration: compute report sections, write JSON, CSV tables, and
figures.

Reports are audit-reproducible: they embed the resolved configuration,
a hash of it, checksums of every ingested dataset, and the seed, and they
contain no timestamps, so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import warnings
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from . import plots
from .config import RunConfig
from .crime_market import (
    imprisonment_effect,
    required_budget,
    solve_equilibrium,
    supply_cpp,
)
from .dataio import file_sha256, ingest_funnel_csv, ingest_survey_csv
from .errors import EmptyCategoryError, ToolkitError
from .funnel import (
    CrimeCategory,
    bundled_dataset_path,
    calibrate_rubric,
    detection_risk,
    registration_coverage,
    stage_rates,
)
from .microsim import enforcement_sweep, simulate_population
from .scenario import build_alternatives_from_model, opportunity_cost
from .valuation import (
    NonUseComponent,
    NonUseKind,
    additional_monetary_value,
    aggregate_wtp,
    direct_value,
    tev_total,
    tourism_baseline,
)

SUBCOMMANDS = ("funnel", "tev", "market", "simulate", "scenario", "calibrate", "all")


def _jsonify(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonify(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {_key(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _key(k):
    return k.value if isinstance(k, Enum) else str(k)


class _SectionWarnings:
    """Collects ModelWarning messages raised while a section computes."""

    def __enter__(self):
        self._ctx = warnings.catch_warnings(record=True)
        self._records = self._ctx.__enter__()
        warnings.simplefilter("always")
        return self

    def __exit__(self, *exc):
        return self._ctx.__exit__(*exc)

    @property
    def messages(self) -> list[str]:
        return [str(r.message) for r in self._records]


class RunContext:
    """Shared inputs of one run: config, ingested datasets, checksums."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.funnel_path = cfg.funnel_csv or bundled_dataset_path()
        self.funnel_records = ingest_funnel_csv(self.funnel_path)
        self.survey_responses = None
        if cfg.survey_csv is not None:
            self.survey_responses = ingest_survey_csv(
                cfg.survey_csv, expected_currency=cfg.currency
            )

    def provenance(self) -> dict:
        datasets = {
            "funnel_csv": {
                "path": str(self.funnel_path),
                "sha256": file_sha256(self.funnel_path),
            },
            "survey_csv": None,
        }
        if self.cfg.survey_csv is not None:
            datasets["survey_csv"] = {
                "path": str(self.cfg.survey_csv),
                "sha256": file_sha256(self.cfg.survey_csv),
            }
        return {
            "tool_version": __version__,
            "config_hash": self.cfg.config_hash(),
            "seed": self.cfg.seed,
            "currency": self.cfg.currency,
            "datasets": datasets,
            "effective_config": self.cfg.effective(),
        }


def funnel_section(ctx: RunContext) -> tuple[dict, dict[str, list[list]]]:
    cfg = ctx.cfg
    records = ctx.funnel_records
    per_category = {}
    table = [["category", "submission_rate", "convictions_per_year",
              "imprisonments_per_year", "detection_risk"]]
    for category in CrimeCategory:
        if not any(r.category is category for r in records):
            continue
        try:
            rates = stage_rates(records, category)
            stage_values = (rates.submission_rate, rates.convictions_per_year,
                            rates.imprisonments_per_year)
        except EmptyCategoryError:
            # a category can be present with zero registered crimes; stage
            # rates are undefined there but the detection risk is not
            stage_values = (None, None, None)
        risk = detection_risk(records, category, cfg.rubric)
        per_category[category.value] = {
            "submission_rate": stage_values[0],
            "convictions_per_year": stage_values[1],
            "imprisonments_per_year": stage_values[2],
            "detection_risk": risk,
        }
        table.append([category.value, *stage_values, risk])
    coverage = registration_coverage(
        cfg.coverage_registered_per_year,
        cfg.active_offenders,
        cfg.crimes_per_offender,
    )
    section = {
        "categories": per_category,
        "rubric": _jsonify(cfg.rubric),
        "registration_coverage": {
            "registered_per_year": cfg.coverage_registered_per_year,
            "active_offenders": cfg.active_offenders,
            "crimes_per_offender": cfg.crimes_per_offender,
            "coverage": coverage,
        },
        "n_records": len(records),
    }
    return section, {"funnel_stats": table}


def tev_section(ctx: RunContext) -> tuple[dict, dict[str, list[list]]]:
    cfg = ctx.cfg
    with _SectionWarnings() as warns:
        direct = direct_value(cfg.direct_input, combine=cfg.direct_combine)
        additional = additional_monetary_value(
            cfg.secondary_before, cfg.secondary_during
        )
        if ctx.survey_responses is not None:
            per_kind = aggregate_wtp(
                ctx.survey_responses,
                population=cfg.survey_population,
                trim_fraction=cfg.survey_trim_fraction,
            )
        else:
            per_kind = {kind: 0.0 for kind in NonUseKind}
        components = [
            NonUseComponent(kind=k, amount=v) for k, v in per_kind.items()
        ]
        breakdown = tev_total(direct, additional, components)
        tourism = tourism_baseline(
            cfg.gdp, cfg.tourism_share, cfg.cultural_tourism_share
        )
    table = [["component", "amount"],
             ["direct", direct],
             ["additional", additional]]
    for component in breakdown.indirect_components:
        table.append([component.kind.value, component.amount])
    table.append(["tev", breakdown.tev])
    section = {
        "breakdown": _jsonify(breakdown),
        "survey_used": ctx.survey_responses is not None,
        "n_survey_responses": len(ctx.survey_responses or []),
        "tourism_baseline": {
            "gdp": cfg.gdp,
            "tourism_share": cfg.tourism_share,
            "cultural_tourism_share": cfg.cultural_tourism_share,
            "annual_cultural_tourism_revenue": tourism,
        },
        "warnings": warns.messages,
    }
    return section, {"tev_components": table}


def market_section(ctx: RunContext) -> tuple[dict, dict[str, list[list]], dict]:
    cfg = ctx.cfg
    equilibrium = solve_equilibrium(
        cfg.supply, cfg.demand, cfg.market_profile, cfg.response,
        cfg.market_tev_at_risk,
    )
    grid = np.linspace(cfg.response.p_floor, cfg.response.p_max, 101)
    supplied, tolerated = [], []
    table = [["p", "supply_cpp", "tolerated_cpp"]]
    for p in grid:
        s = supply_cpp(
            cfg.supply,
            dataclasses.replace(cfg.market_profile, detention_prob=float(p)),
        )
        t = cfg.demand.tolerated_level(
            required_budget(float(p), cfg.market_tev_at_risk, cfg.response)
        )
        supplied.append(s)
        tolerated.append(t)
        table.append([float(p), s, t])
    effect = imprisonment_effect(cfg.elasticities, cfg.market_imprisonment_increase)
    effect_table = [["imprisonment_increase", "crimes_reduced"]]
    for k in range(11):
        delta = cfg.market_imprisonment_increase * k / 10.0
        effect_table.append([delta, imprisonment_effect(cfg.elasticities, delta)])
    section = {
        "equilibrium": _jsonify(equilibrium),
        "supply_params": _jsonify(cfg.supply),
        "demand_constraint": _jsonify(cfg.demand),
        "elasticities": _jsonify(cfg.elasticities),
        "imprisonment_effect": {
            "imprisonment_increase": cfg.market_imprisonment_increase,
            "crimes_reduced": effect,
        },
        "tev_at_risk": cfg.market_tev_at_risk,
    }
    figure_inputs = {
        "p_grid": [float(p) for p in grid],
        "supplied": supplied,
        "tolerated": tolerated,
        "p_star": equilibrium.p_star,
    }
    tables = {"market_curves": table, "imprisonment_effect": effect_table}
    return section, tables, figure_inputs


def simulate_section(ctx: RunContext) -> tuple[dict, dict[str, list[list]], list]:
    cfg = ctx.cfg
    result = simulate_population(cfg.population)
    sweep = enforcement_sweep(cfg.population, cfg.sweep_p_values)
    table = [["p", "cpr", "lambda_realized", "cpp", "n_committing", "stderr_cpr"]]
    for p, r in sweep:
        table.append([p, r.cpr, r.lambda_realized, r.cpp, r.n_committing,
                      r.stderr_cpr])
    section = {
        "at_config_p": _jsonify(result),
        "population": {
            "n_agents": cfg.population.n_agents,
            "p": cfg.population.p,
            "lambda_active": cfg.population.lambda_active,
            "seed": cfg.population.seed,
        },
        "sweep": [{"p": p, **_jsonify(r)} for p, r in sweep],
    }
    return section, {"sim_sweep": table}, sweep


def scenario_section(ctx: RunContext) -> tuple[dict, dict[str, list[list]], object]:
    cfg = ctx.cfg
    baseline_p = detection_risk(
        ctx.funnel_records, CrimeCategory.TOTAL, cfg.rubric
    )
    tev_sec, _ = tev_section(ctx)
    tev_per_crime = tev_sec["breakdown"]["tev"]
    built = build_alternatives_from_model(
        cfg.elasticities, cfg.response, tev_per_crime, baseline_p,
        cfg.scenario_levers,
    )
    report = opportunity_cost(built.alternatives, cfg.scenario_chosen)
    table = [["alternative", "enforcement_budget", "redirected_resource_cost",
              "expected_crimes_averted", "tev_per_averted_crime",
              "tourism_uplift", "benefits", "costs", "net"]]
    for alt, ev in zip(built.alternatives, report.evaluations):
        table.append([alt.name, alt.enforcement_budget,
                      alt.redirected_resource_cost, alt.expected_crimes_averted,
                      alt.tev_per_averted_crime, alt.tourism_uplift,
                      ev.benefits, ev.costs, ev.net])
    section = {
        "alternatives": _jsonify(built.alternatives),
        "derivation": _jsonify(built.parameters),
        "evaluation": _jsonify(report),
        "chosen": built.alternatives[cfg.scenario_chosen].name,
        "tev_warnings": tev_sec["warnings"],
    }
    return section, {"scenario_alternatives": table}, report


def calibrate_section(ctx: RunContext) -> tuple[dict, dict[str, list[list]]]:
    cfg = ctx.cfg
    calibration = calibrate_rubric(ctx.funnel_records, cfg.calibrate_targets)
    table = [["category", "target_risk", "fitted_risk", "match"]]
    for category, target in cfg.calibrate_targets.items():
        fitted = detection_risk(ctx.funnel_records, category, calibration.rubric)
        table.append([category.value, target, fitted, int(fitted == target)])
    section = {
        "fitted_rubric": _jsonify(calibration.rubric),
        "mismatch_count": calibration.mismatch_count,
        "mismatches": {
            c.value: {"target": t, "fitted": g}
            for c, (t, g) in calibration.mismatches.items()
        },
        "targets": {c.value: t for c, t in cfg.calibrate_targets.items()},
    }
    return section, {"calibration": table}


def run(subcommand: str, cfg: RunConfig) -> dict:
    """Execute one subcommand, write all outputs, and return the report."""
    if subcommand not in SUBCOMMANDS:
        raise ToolkitError(f"unknown subcommand {subcommand!r}", code="BAD_SUBCOMMAND")
    ctx = RunContext(cfg)
    wanted = SUBCOMMANDS[:-1] if subcommand == "all" else (subcommand,)

    sections: dict = {}
    tables: dict[str, list[list]] = {}
    figure_jobs = []

    if "funnel" in wanted:
        sections["funnel"], t = funnel_section(ctx)
        tables.update(t)
        figure_jobs.append(("funnel", lambda path: plots.funnel_figure(
            ctx.funnel_records, path)))
    if "tev" in wanted:
        sections["tev"], t = tev_section(ctx)
        tables.update(t)
        breakdown_data = sections["tev"]["breakdown"]
        figure_jobs.append(("tev", lambda path, d=breakdown_data: plots.tev_figure(
            _breakdown_from_json(d), cfg.currency, path)))
    if "market" in wanted:
        sections["market"], t, curve_inputs = market_section(ctx)
        tables.update(t)
        figure_jobs.append(("market", lambda path, c=curve_inputs: plots.market_figure(
            c["p_grid"], c["supplied"], c["tolerated"], c["p_star"], path)))
    if "simulate" in wanted:
        sections["simulate"], t, sweep = simulate_section(ctx)
        tables.update(t)
        figure_jobs.append(("simulate", lambda path, s=sweep: plots.sweep_figure(s, path)))
    if "scenario" in wanted:
        sections["scenario"], t, oc_report = scenario_section(ctx)
        tables.update(t)
        figure_jobs.append(("scenario", lambda path, r=oc_report: plots.scenario_figure(
            r, cfg.currency, path)))
    if "calibrate" in wanted:
        sections["calibrate"], t = calibrate_section(ctx)
        tables.update(t)

    report = {
        "tool": {"name": "heritagecrime", "version": __version__},
        "subcommand": subcommand,
        "provenance": ctx.provenance(),
        "sections": sections,
    }
    _write_outputs(cfg, report, tables, figure_jobs)
    return report


def _breakdown_from_json(data: dict):
    components = [
        NonUseComponent(
            kind=NonUseKind(c["kind"]),
            amount=c["amount"],
            scientific_subvalue=c.get("scientific_subvalue"),
        )
        for c in data["indirect_components"]
    ]
    return tev_total(data["direct"], data["additional"], components)


def _write_outputs(
    cfg: RunConfig,
    report: dict,
    tables: dict[str, list[list]],
    figure_jobs: Sequence[tuple[str, object]],
) -> None:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    report_path = out / "report.json"
    report_path.write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    tables_dir = out / "tables"
    tables_dir.mkdir(exist_ok=True)
    for name, rows in tables.items():
        with (tables_dir / f"{name}.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerows(rows)
    if cfg.figures:
        figures_dir = out / "figures"
        for name, job in figure_jobs:
            job(figures_dir / f"{name}.png")
