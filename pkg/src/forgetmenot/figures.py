"""Matplotlib rendering of reports to image files.

The reporting layer emits plot-ready series; this module is one consumer
of those series, wired to the CLI's ``--plot`` flags.  Figures are written
to files (PNG/SVG per the extension), never shown interactively.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .catalog import RankReport, pareto_front
from .engine import EmissionBreakdown
from .reporting import Normalization, TrendSweep
from .scenario import ScenarioReport
from .usage import SourceId

_SOURCE_LABELS = {
    SourceId.ETCHING: "Etch",
    SourceId.CHAMBER_CLEANING: "Clean",
    SourceId.PHOTOLITHOGRAPHY: "Litho",
    SourceId.HEAT_TRANSFER_FLUIDS: "HTF",
    SourceId.SOLVENT_FLUIDS: "Solvent",
    SourceId.DIELECTRIC_FLUIDS: "Dielectric",
    SourceId.WAFER_THINNING: "Thinning",
    SourceId.TESTING: "Testing",
    SourceId.VAPOR_PHASE_SOLDERING: "Soldering",
    SourceId.VACUUM_PUMPS: "Vacuum",
    SourceId.PLASMA_COATINGS: "Coatings",
    SourceId.PACKAGING: "Packaging",
}


def _save(fig, destination: str | Path) -> Path:
    path = Path(destination)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_breakdown(breakdown: EmissionBreakdown, destination: str | Path) -> Path:
    """Per-source bar chart of one breakdown."""
    labels = [_SOURCE_LABELS[row.source] for row in breakdown.sources]
    values = [row.emission_gco2eq for row in breakdown.sources]
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.bar(labels, values, color="#2b7a78")
    ax.set_ylabel("gCO$_2$eq per unit")
    ax.set_title(
        f"Fluorinated emissions by source (total {breakdown.total_gco2eq:,.0f} gCO$_2$eq)"
    )
    ax.tick_params(axis="x", rotation=45)
    return _save(fig, destination)


def render_scenario(report: ScenarioReport, destination: str | Path) -> Path:
    """Baseline vs levered per-source bars."""
    labels = [_SOURCE_LABELS[row.source] for row in report.baseline.sources]
    baseline = [row.emission_gco2eq for row in report.baseline.sources]
    modified = [row.emission_gco2eq for row in report.modified.sources]
    positions = range(len(labels))
    width = 0.4
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.bar([p - width / 2 for p in positions], baseline, width, label="baseline",
           color="#9ea3a8")
    ax.bar([p + width / 2 for p in positions], modified, width, label="with levers",
           color="#2b7a78")
    ax.set_xticks(list(positions), labels, rotation=45)
    ax.set_ylabel("gCO$_2$eq per unit")
    ax.set_title(f"Scenario delta: {report.total_delta_percent:+.1f}% total")
    ax.legend()
    return _save(fig, destination)


def render_sweep(trend: TrendSweep, destination: str | Path) -> Path:
    """Total emissions along the sweep axis, normalized curve included."""
    xs = [x for x, _ in trend.points]
    totals = [b.total_gco2eq for _, b in trend.points]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(xs, totals, marker="o", color="#2b7a78", label="total")
    ax.set_xlabel(trend.axis.value)
    ax.set_ylabel("gCO$_2$eq per unit")
    if trend.normalization is not Normalization.NONE:
        twin = ax.twinx()
        twin.plot(
            xs, trend.normalized_totals(), marker="s", linestyle="--",
            color="#b0413e", label=f"total {trend.normalization.value}",
        )
        twin.set_ylabel(f"gCO$_2$eq {trend.normalization.value}")
    ax.set_title("Emission trend sweep")
    return _save(fig, destination)


def render_ranking(report: RankReport, destination: str | Path) -> Path:
    """Emissions vs performance scatter with the Pareto front traced."""
    perfs = [a.performance for a in report.ranking]
    totals = [a.total_gco2eq for a in report.ranking]
    front = pareto_front(report.ranking)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.scatter(perfs, totals, s=18, color="#9ea3a8", label="assemblies")
    ax.plot(
        [a.performance for a in front],
        [a.total_gco2eq for a in front],
        marker="o", color="#b0413e", label="Pareto front",
    )
    for name, assembly in (("lowest", report.lowest), ("median", report.median),
                           ("highest", report.highest)):
        ax.annotate(name, (assembly.performance, assembly.total_gco2eq),
                    textcoords="offset points", xytext=(6, 4), fontsize=8)
    ax.set_xlabel("performance score")
    ax.set_ylabel("total gCO$_2$eq")
    ax.set_title(f"{report.klass}: {report.count} assemblies ({report.horizon.value})")
    ax.legend()
    return _save(fig, destination)
