"""Trend sweeps and JSON/CSV export of every report type.

Exports are byte-stable for identical inputs: payloads carry no timestamps
(an optional sidecar file holds run metadata instead) and all columns have
a fixed order.  CSV dialect: comma separator, '.' decimal point, LF line
endings, UTF-8, mandatory header row.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from . import __version__ as _version
from .engine import ComparisonReport, EmissionBreakdown, total_emission
from .errors import InvalidValueError
from .geometry import HardwareSpec
from .profile import FabProfile
from .scenario import ScenarioReport
from .calibration import CalibrationResult
from .catalog import RankReport, RankStabilityReport
from .units import GwpHorizon
from .usage import SourceId


class Normalization(enum.Enum):
    NONE = "none"
    PER_GB = "per_gb"
    PER_TB = "per_tb"

    @classmethod
    def parse(cls, value: str) -> "Normalization":
        try:
            return cls(value.lower())
        except ValueError:
            choices = ", ".join(n.value for n in cls)
            raise InvalidValueError("normalization", f"expected one of {choices}, got {value!r}")


_NORMALIZATION_FEATURE = {
    Normalization.PER_GB: "memory_gb",
    Normalization.PER_TB: "capacity_tb",
}


class SweepAxis(enum.Enum):
    NODE_NM = "node_nm"
    CAPACITY_TB = "capacity_tb"
    SPEC_LIST = "spec_list"

    @classmethod
    def parse(cls, value: str) -> "SweepAxis":
        try:
            return cls(value.lower())
        except ValueError:
            choices = ", ".join(a.value for a in cls)
            raise InvalidValueError("axis", f"expected one of {choices}, got {value!r}")


@dataclass(frozen=True)
class TrendSweep:
    """One engine evaluation per axis point, in axis order."""

    axis: SweepAxis
    points: tuple[tuple[float, EmissionBreakdown], ...]
    normalization: Normalization = Normalization.NONE

    def divisor(self, breakdown: EmissionBreakdown) -> float:
        if self.normalization is Normalization.NONE:
            return 1.0
        feature = _NORMALIZATION_FEATURE[self.normalization]
        value = breakdown.spec.features.get(feature, 0.0)
        if value <= 0:
            raise InvalidValueError(
                f"spec.features.{feature}",
                f"normalization {self.normalization.value} needs a positive value",
            )
        return value

    def normalized_totals(self) -> list[float]:
        """Total emissions per point divided by the normalization feature."""
        return [b.total_gco2eq / self.divisor(b) for _, b in self.points]

    def to_json_dict(self) -> dict:
        payload: dict = {
            "axis": self.axis.value,
            "normalization": self.normalization.value,
            "points": [],
        }
        for x, breakdown in self.points:
            entry = {"x": x, "breakdown": breakdown.to_json_dict()}
            if self.normalization is not Normalization.NONE:
                divisor = self.divisor(breakdown)
                # Only emission fields are normalized; usage stays in grams.
                entry["normalized"] = {
                    "total_gco2eq": breakdown.total_gco2eq / divisor,
                    "per_source_gco2eq": {
                        row.source.value: row.emission_gco2eq / divisor
                        for row in breakdown.sources
                    },
                }
            payload["points"].append(entry)
        return payload


def _check_monotone(values: Sequence[float]) -> None:
    if len(values) < 2:
        return
    increasing = all(b > a for a, b in zip(values, values[1:]))
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    if not (increasing or decreasing):
        raise InvalidValueError("axis.values", "must be strictly monotone")


def sweep(
    base_spec: HardwareSpec,
    profile: FabProfile,
    axis: SweepAxis,
    values: Sequence[float] | None = None,
    specs: Sequence[HardwareSpec] | None = None,
    horizon: GwpHorizon | None = None,
    normalization: Normalization = Normalization.NONE,
) -> TrendSweep:
    """Evaluate the engine once per axis point.

    ``node_nm`` and ``capacity_tb`` axes derive each point's spec from the
    base spec; a ``spec_list`` axis evaluates the given specs in order
    (x is the ordinal position).
    """
    horizon = horizon or profile.default_horizon
    points: list[tuple[float, EmissionBreakdown]] = []
    if axis is SweepAxis.SPEC_LIST:
        if not specs:
            raise InvalidValueError("specs", "spec_list axis requires at least one spec")
        for i, spec in enumerate(specs):
            points.append((float(i), total_emission(spec, profile, horizon)))
    else:
        if not values:
            raise InvalidValueError("values", f"{axis.value} axis requires values")
        _check_monotone(values)
        for value in values:
            if axis is SweepAxis.NODE_NM:
                spec = replace(base_spec, node_nm=value)
            else:
                features = dict(base_spec.features)
                features["capacity_tb"] = value
                spec = replace(base_spec, features=features)
            points.append((float(value), total_emission(spec, profile, horizon)))
    return TrendSweep(axis=axis, points=tuple(points), normalization=normalization)


# ---------------------------------------------------------------------------
# CSV rendering (fixed column orders)
# ---------------------------------------------------------------------------

BREAKDOWN_CSV_COLUMNS = ["source", "usage_g", "wafers", "release", "gwp", "gco2eq"]
RANKING_CSV_COLUMNS = [
    "rank",
    "cpu",
    "dram",
    "storage",
    "embodied_g",
    "fluorinated_g",
    "total_g",
    "performance",
]


def breakdown_csv(breakdown: EmissionBreakdown) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BREAKDOWN_CSV_COLUMNS)
    for row in breakdown.sources:
        writer.writerow(
            [
                row.source.value,
                repr(row.usage_g_per_wafer),
                repr(row.wafers_per_unit),
                repr(row.release_fraction),
                repr(row.gwp),
                repr(row.emission_gco2eq),
            ]
        )
    writer.writerow(["total", "", "", "", "", repr(breakdown.total_gco2eq)])
    return out.getvalue()


def ranking_csv(report: RankReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RANKING_CSV_COLUMNS)
    for rank, assembly in enumerate(report.ranking, start=1):
        writer.writerow(
            [
                rank,
                assembly.cpu,
                assembly.dram,
                assembly.storage,
                repr(sum(assembly.embodied_gco2eq.values())),
                repr(sum(assembly.fluorinated_gco2eq.values())),
                repr(assembly.total_gco2eq),
                repr(assembly.performance),
            ]
        )
    return out.getvalue()


def sweep_csv(trend: TrendSweep) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = ["x", *(source.value for source in SourceId), "total_gco2eq"]
    normalized = trend.normalization is not Normalization.NONE
    if normalized:
        header.append(f"total_gco2eq_{trend.normalization.value}")
    writer.writerow(header)
    for x, breakdown in trend.points:
        row = [repr(x)]
        row.extend(repr(breakdown.emission(source)) for source in SourceId)
        row.append(repr(breakdown.total_gco2eq))
        if normalized:
            row.append(repr(breakdown.total_gco2eq / trend.divisor(breakdown)))
        writer.writerow(row)
    return out.getvalue()


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

_CSV_RENDERERS = {
    EmissionBreakdown: breakdown_csv,
    RankReport: ranking_csv,
    TrendSweep: sweep_csv,
}

Exportable = (
    EmissionBreakdown
    | ScenarioReport
    | TrendSweep
    | RankReport
    | RankStabilityReport
    | ComparisonReport
    | CalibrationResult
)


def render_json(report) -> str:
    payload = report.to_json_dict() if hasattr(report, "to_json_dict") else report
    return json.dumps(payload, indent=2) + "\n"


def render_csv(report) -> str:
    renderer = _CSV_RENDERERS.get(type(report))
    if renderer is None:
        raise InvalidValueError(
            "format", f"{type(report).__name__} has no CSV form; use JSON"
        )
    return renderer(report)


def export(
    report: Exportable, fmt: str, destination: str | Path, sidecar: bool = False
) -> Path:
    """Write a report to disk; identical inputs produce identical bytes.

    With ``sidecar=True`` a ``<destination>.meta.json`` file records the
    tool version and payload kind (run metadata lives there so the payload
    itself stays reproducible).
    """
    path = Path(destination)
    if fmt == "json":
        text = render_json(report)
    elif fmt == "csv":
        text = render_csv(report)
    else:
        raise InvalidValueError("format", f"expected 'json' or 'csv', got {fmt!r}")
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise InvalidValueError("out", f"cannot write {path}: {exc}")
    if sidecar:
        meta = {
            "tool_version": _version,
            "payload_kind": type(report).__name__,
            "format": fmt,
        }
        Path(str(path) + ".meta.json").write_text(
            json.dumps(meta, indent=2) + "\n", encoding="utf-8", newline="\n"
        )
    return path
