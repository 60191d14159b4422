"""Die-area model and wafer-fraction arithmetic.

The wafer fraction (wafers consumed per finished unit) is deliberately not
rounded to an integer; fabs fold integer effects into their yield and
utilization figures, so fractional wafers are the modeling convention here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidValueError, MissingFeatureError, SchemaError


class HardwareKind(enum.Enum):
    CPU = "cpu"
    DRAM = "dram"
    STORAGE = "storage"

    @classmethod
    def parse(cls, value: str) -> "HardwareKind":
        try:
            return cls(value.lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise InvalidValueError("kind", f"expected one of {choices}, got {value!r}")


class Lithography(enum.Enum):
    DUV = "duv"
    EUV = "euv"
    EUV_HIGH_NA = "euv_high_na"

    @classmethod
    def parse(cls, value: str) -> "Lithography":
        try:
            return cls(value.lower())
        except ValueError:
            choices = ", ".join(t.value for t in cls)
            raise InvalidValueError("lithography", f"expected one of {choices}, got {value!r}")


@dataclass(frozen=True)
class WaferGeometry:
    """Wafer diameter plus the usable-area and yield fractions."""

    diameter_mm: float
    usable_fraction: float
    yield_fraction: float

    def __post_init__(self) -> None:
        if self.diameter_mm <= 0:
            raise InvalidValueError("geometry.wafer_diameter_mm", "must be > 0")
        for name, value in (
            ("usable_fraction", self.usable_fraction),
            ("yield_fraction", self.yield_fraction),
        ):
            if not 0 < value <= 1:
                raise InvalidValueError(f"geometry.{name}", f"must be in (0, 1], got {value}")


@dataclass(frozen=True)
class DieAreaModel:
    """Affine model of die area: constant + sum(coefficient * feature)."""

    terms: Mapping[str, float]
    constant_mm2: float = 0.0

    def __post_init__(self) -> None:
        for name, coeff in self.terms.items():
            if coeff < 0:
                raise InvalidValueError(f"die_area_model.{name}", f"must be >= 0, got {coeff}")
        if self.constant_mm2 < 0:
            raise InvalidValueError("die_area_model.constant_mm2", "must be >= 0")


@dataclass(frozen=True)
class HardwareSpec:
    """The device being modeled: kind, process node, and feature sizes."""

    kind: HardwareKind
    node_nm: float
    lithography: Lithography
    features: Mapping[str, float]
    tdp_w: float = 0.0
    package_size_mm2: float = 0.0

    def __post_init__(self) -> None:
        if self.node_nm <= 0:
            raise InvalidValueError("spec.node_nm", f"must be > 0, got {self.node_nm}")
        if self.tdp_w < 0:
            raise InvalidValueError("spec.tdp_w", f"must be >= 0, got {self.tdp_w}")
        if self.package_size_mm2 < 0:
            raise InvalidValueError("spec.package_size_mm2", "must be >= 0")
        for name, value in self.features.items():
            if value < 0:
                raise InvalidValueError(f"spec.features.{name}", f"must be >= 0, got {value}")

    def feature(self, name: str) -> float:
        try:
            return self.features[name]
        except KeyError:
            raise MissingFeatureError(
                f"spec has no feature {name!r} (features: {sorted(self.features)})"
            )

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "node_nm": self.node_nm,
            "lithography": self.lithography.value,
            "features": dict(self.features),
            "tdp_w": self.tdp_w,
            "package_size_mm2": self.package_size_mm2,
        }


def die_area(spec: HardwareSpec, model: DieAreaModel) -> float:
    """Evaluate the affine area model against the spec's features (mm^2)."""
    area = model.constant_mm2
    for name, coeff in model.terms.items():
        area += coeff * spec.feature(name)
    return area


def wafer_area(geometry: WaferGeometry) -> float:
    """Full wafer area pi * (diameter/2)^2 in mm^2."""
    radius = geometry.diameter_mm / 2.0
    return math.pi * radius * radius


def wafers_per_unit(die_area_mm2: float, geometry: WaferGeometry) -> float:
    """Fraction of a wafer consumed per unit; > 1 is legal for large parts."""
    if die_area_mm2 <= 0:
        raise InvalidValueError("die_area_mm2", f"must be > 0, got {die_area_mm2}")
    usable = geometry.yield_fraction * wafer_area(geometry) * geometry.usable_fraction
    return die_area_mm2 / usable


# ---------------------------------------------------------------------------
# JSON document handling
# ---------------------------------------------------------------------------

_SPEC_KEYS = {"kind", "node_nm", "lithography", "features", "tdp_w", "package_size_mm2"}


def _number(obj, context: str, default=None) -> float:
    if obj is None and default is not None:
        return default
    if not isinstance(obj, (int, float)) or isinstance(obj, bool):
        raise SchemaError(f"{context}: expected a number")
    return float(obj)


def parse_spec(obj: Mapping, context: str = "spec") -> HardwareSpec:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{context}: expected an object")
    for key in obj:
        if key not in _SPEC_KEYS:
            raise SchemaError(f"{context}: unknown key {key!r}")
    for key in ("kind", "node_nm", "lithography", "features"):
        if key not in obj:
            raise SchemaError(f"{context}: {key!r} is required")
    features_obj = obj["features"]
    if not isinstance(features_obj, Mapping):
        raise SchemaError(f"{context}.features: expected an object")
    features = {
        str(name): _number(value, f"{context}.features.{name}")
        for name, value in features_obj.items()
    }
    return HardwareSpec(
        kind=HardwareKind.parse(str(obj["kind"])),
        node_nm=_number(obj["node_nm"], f"{context}.node_nm"),
        lithography=Lithography.parse(str(obj["lithography"])),
        features=features,
        tdp_w=_number(obj.get("tdp_w"), f"{context}.tdp_w", default=0.0),
        package_size_mm2=_number(
            obj.get("package_size_mm2"), f"{context}.package_size_mm2", default=0.0
        ),
    )


def parse_die_area_model(obj: Mapping, context: str) -> DieAreaModel:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{context}: expected an object")
    for key in obj:
        if key not in {"terms", "constant_mm2"}:
            raise SchemaError(f"{context}: unknown key {key!r}")
    terms_obj = obj.get("terms", {})
    if not isinstance(terms_obj, Mapping):
        raise SchemaError(f"{context}.terms: expected an object")
    terms = {
        str(name): _number(value, f"{context}.terms.{name}") for name, value in terms_obj.items()
    }
    return DieAreaModel(
        terms=terms,
        constant_mm2=_number(obj.get("constant_mm2"), f"{context}.constant_mm2", default=0.0),
    )


def die_area_model_to_json(model: DieAreaModel) -> dict:
    return {"terms": dict(model.terms), "constant_mm2": model.constant_mm2}
