"""Figure rendering for run reports.

Each report section gets one PNG written next to its CSV tables.  All
figures use the Agg backend and fixed metadata so repeated runs produce
stable files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from . import __version__
from .funnel import CrimeCategory, FunnelRecord
from .microsim import SimResult
from .scenario import NetBenefitReport
from .valuation import TevBreakdown

_PNG_METADATA = {"Software": f"heritagecrime {__version__}"}

_STAGE_LABELS = ("registered", "submitted", "convicted", "imprisoned")


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def funnel_figure(records: Sequence[FunnelRecord], path: Path) -> Path:
    """Per-category yearly means of each pipeline stage, log-scaled bars."""
    categories = [c for c in CrimeCategory if any(r.category is c for r in records)]
    means = {}
    for category in categories:
        subset = [r for r in records if r.category is category]
        n = len(subset)
        means[category] = (
            sum(r.registered for r in subset) / n,
            sum(r.submitted_to_court for r in subset) / n,
            sum(r.convicted_persons for r in subset) / n,
            sum(r.imprisoned_effective for r in subset) / n,
        )
    fig, ax = plt.subplots(figsize=(9, 4.5))
    width = 0.2
    for offset, label in enumerate(_STAGE_LABELS):
        xs = [i + (offset - 1.5) * width for i in range(len(categories))]
        ys = [means[c][offset] for c in categories]
        ax.bar(xs, ys, width=width, label=label)
    ax.set_xticks(range(len(categories)))
    ax.set_xticklabels([c.value for c in categories])
    ax.set_yscale("symlog", linthresh=1.0)
    ax.set_ylabel("mean count per year")
    ax.set_title("Justice-pipeline stages by crime category")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def market_figure(
    p_grid: Sequence[float],
    supplied: Sequence[float],
    tolerated: Sequence[float],
    p_star: float | None,
    path: Path,
) -> Path:
    """Supply and tolerated-crime curves over detention probability."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(p_grid, supplied, label="crime supply")
    ax.plot(p_grid, tolerated, label="tolerated level", linestyle="--")
    if p_star is not None:
        ax.axvline(p_star, color="gray", linewidth=1, label=f"equilibrium p={p_star:.4f}")
    ax.set_xlabel("detention probability")
    ax.set_ylabel("crimes per capita")
    ax.set_title("Crime market equilibrium")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def sweep_figure(sweep: Sequence[tuple[float, SimResult]], path: Path) -> Path:
    """Simulated participation against detention probability with a
    3-standard-error band."""
    ps = [p for p, _ in sweep]
    cprs = [r.cpr for _, r in sweep]
    los = [r.cpr - 3 * r.stderr_cpr for _, r in sweep]
    his = [r.cpr + 3 * r.stderr_cpr for _, r in sweep]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.fill_between(ps, los, his, alpha=0.25, label="±3 stderr")
    ax.plot(ps, cprs, marker="o", label="simulated participation rate")
    ax.set_xlabel("detention probability")
    ax.set_ylabel("participation rate")
    ax.set_title("Enforcement sweep")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def tev_figure(breakdown: TevBreakdown, currency: str, path: Path) -> Path:
    """Horizontal bars of the TEV decomposition."""
    labels = ["direct", "additional"]
    values = [breakdown.direct, breakdown.additional]
    for component in breakdown.indirect_components:
        labels.append(component.kind.value)
        values.append(component.amount)
    labels.append("TEV")
    values.append(breakdown.tev)
    colors = ["C0"] * (len(values) - 1) + ["C3"]
    fig, ax = plt.subplots(figsize=(7, 0.6 * len(values) + 1.5))
    ax.barh(range(len(values)), values, color=colors)
    ax.set_yticks(range(len(values)))
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    ax.set_xlabel(f"value ({currency})")
    ax.set_title("Total economic value decomposition")
    fig.tight_layout()
    return _save(fig, path)


def scenario_figure(report: NetBenefitReport, currency: str, path: Path) -> Path:
    """Benefits, costs, and net per alternative."""
    names = [e.name for e in report.evaluations]
    xs = range(len(names))
    width = 0.25
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar([x - width for x in xs], [e.benefits for e in report.evaluations],
           width=width, label="benefits")
    ax.bar(list(xs), [e.costs for e in report.evaluations],
           width=width, label="costs")
    ax.bar([x + width for x in xs], [e.net for e in report.evaluations],
           width=width, label="net")
    ax.axhline(0, color="black", linewidth=0.8)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names)
    ax.set_ylabel(f"money ({currency})")
    ax.set_title("Counteraction alternatives")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)
