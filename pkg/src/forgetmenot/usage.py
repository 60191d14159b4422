"""Per-wafer compound usage formulas, one family per emission source group.

Twelve sources, six formula shapes.  ``node_ratio`` is always the reference
node size divided by the modeled node size (N_ref / N, > 0), computed once
by the engine so the formulas never see raw node sizes.  The lithography
factor phi applies only to etching, chamber cleaning, and photolithography;
the other nine sources take phi = 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidValueError, ProfileError
from .geometry import Lithography


class SourceId(enum.Enum):
    """Emission sources in fixed declaration (and summation) order."""

    ETCHING = "etching"
    CHAMBER_CLEANING = "chamber_cleaning"
    PHOTOLITHOGRAPHY = "photolithography"
    HEAT_TRANSFER_FLUIDS = "heat_transfer_fluids"
    SOLVENT_FLUIDS = "solvent_fluids"
    DIELECTRIC_FLUIDS = "dielectric_fluids"
    WAFER_THINNING = "wafer_thinning"
    TESTING = "testing"
    VAPOR_PHASE_SOLDERING = "vapor_phase_soldering"
    VACUUM_PUMPS = "vacuum_pumps"
    PLASMA_COATINGS = "plasma_coatings"
    PACKAGING = "packaging"

    @classmethod
    def parse(cls, value: str) -> "SourceId":
        try:
            return cls(value.lower())
        except ValueError:
            raise InvalidValueError("source", f"unknown emission source {value!r}")


class UsageFamily(enum.Enum):
    """Formula shape shared by one or more sources."""

    AREA_STEP = "area_step"          # k * A_die * steps * ratio^alpha [* phi]
    PROCESS_TIME = "process_time"    # k * t_ref * ratio^alpha * TDP
    DIE_AREA = "die_area"            # k * A_die
    WAFER_AREA = "wafer_area"        # k * A_wafer
    PACKAGE_STEPS = "package_steps"  # k * solder_steps * (pkg/pkg_ref)^alpha
    NODE_STEPS = "node_steps"        # k * steps * ratio^alpha
    PACKAGE_AREA = "package_area"    # k * package_size


SOURCE_FAMILY: Mapping[SourceId, UsageFamily] = {
    SourceId.ETCHING: UsageFamily.AREA_STEP,
    SourceId.CHAMBER_CLEANING: UsageFamily.AREA_STEP,
    SourceId.PHOTOLITHOGRAPHY: UsageFamily.AREA_STEP,
    SourceId.HEAT_TRANSFER_FLUIDS: UsageFamily.PROCESS_TIME,
    SourceId.SOLVENT_FLUIDS: UsageFamily.AREA_STEP,
    SourceId.DIELECTRIC_FLUIDS: UsageFamily.DIE_AREA,
    SourceId.WAFER_THINNING: UsageFamily.WAFER_AREA,
    SourceId.TESTING: UsageFamily.AREA_STEP,
    SourceId.VAPOR_PHASE_SOLDERING: UsageFamily.PACKAGE_STEPS,
    SourceId.VACUUM_PUMPS: UsageFamily.NODE_STEPS,
    SourceId.PLASMA_COATINGS: UsageFamily.AREA_STEP,
    SourceId.PACKAGING: UsageFamily.PACKAGE_AREA,
}

# Sources whose usage carries the lithography factor.
LITH_FACTOR_SOURCES = frozenset(
    {SourceId.ETCHING, SourceId.CHAMBER_CLEANING, SourceId.PHOTOLITHOGRAPHY}
)

# Families that scale a reference step/time count by (N_ref/N)^alpha.
NODE_SCALED_FAMILIES = frozenset(
    {UsageFamily.AREA_STEP, UsageFamily.PROCESS_TIME, UsageFamily.NODE_STEPS}
)

# Compounds conventionally consumed by each source; used for default
# compound mixes, reclaim-lever targeting, and calibration allocation.
SOURCE_COMPOUNDS: Mapping[SourceId, tuple[str, ...]] = {
    SourceId.ETCHING: ("CF4", "C2F6", "CHF3"),
    SourceId.CHAMBER_CLEANING: ("NF3", "SF6"),
    SourceId.PHOTOLITHOGRAPHY: ("CHF3", "C4F8"),
    SourceId.HEAT_TRANSFER_FLUIDS: ("C3F8", "C4F8"),
    SourceId.SOLVENT_FLUIDS: ("C2F6", "NF3"),
    SourceId.DIELECTRIC_FLUIDS: ("C4F8", "CHF3"),
    SourceId.WAFER_THINNING: ("SF6", "CF4"),
    SourceId.TESTING: ("C3F8", "SF6"),
    SourceId.VAPOR_PHASE_SOLDERING: ("SF6",),
    SourceId.VACUUM_PUMPS: ("CF4", "C2F6"),
    SourceId.PLASMA_COATINGS: ("CHF3", "C4F8"),
    SourceId.PACKAGING: ("SF6", "C3F8"),
}

# Blended per-source GWPs at the 500-year horizon; the compound-level
# emission ratios behind these blends are not public, so the blended values
# ship as first-class configuration constants.
DEFAULT_SOURCE_GWP_Y500: Mapping[SourceId, float] = {
    SourceId.ETCHING: 9928.0,
    SourceId.CHAMBER_CLEANING: 19550.0,
    SourceId.PHOTOLITHOGRAPHY: 12356.0,
    SourceId.HEAT_TRANSFER_FLUIDS: 9405.0,
    SourceId.SOLVENT_FLUIDS: 13140.0,
    SourceId.DIELECTRIC_FLUIDS: 9136.0,
    SourceId.WAFER_THINNING: 17490.0,
    SourceId.TESTING: 16285.0,
    SourceId.VAPOR_PHASE_SOLDERING: 17140.0,
    SourceId.VACUUM_PUMPS: 9264.0,
    SourceId.PLASMA_COATINGS: 11000.0,
    SourceId.PACKAGING: 18600.0,
}


@dataclass(frozen=True)
class StepScaling:
    """Reference step count plus the exponent scaling it with node shrink."""

    n_ref_steps: float
    alpha: float

    def __post_init__(self) -> None:
        if self.n_ref_steps < 0:
            raise InvalidValueError("step_scaling.n_ref_steps", "must be >= 0")
        if self.alpha < 0:
            raise InvalidValueError("step_scaling.alpha", "must be >= 0")

    def steps_at(self, node_ratio: float) -> float:
        _check_positive("node_ratio", node_ratio)
        return self.n_ref_steps * node_ratio**self.alpha


@dataclass(frozen=True)
class LithographyFactor:
    """Usage multiplier phi per lithography generation; all entries > 0."""

    factors: Mapping[Lithography, float]

    def __post_init__(self) -> None:
        for lith in Lithography:
            if lith not in self.factors:
                raise InvalidValueError("lith_factors", f"missing entry for {lith.value}")
        for lith, phi in self.factors.items():
            if phi <= 0:
                raise InvalidValueError(f"lith_factors.{lith.value}", f"must be > 0, got {phi}")

    def phi(self, lithography: Lithography) -> float:
        return self.factors[lithography]


def _check_positive(name: str, value: float) -> None:
    if value <= 0:
        raise InvalidValueError(name, f"must be > 0, got {value}")


def area_step_usage(
    k: float, die_area_mm2: float, scaling: StepScaling, node_ratio: float, phi: float = 1.0
) -> float:
    """k * A_die * steps_ref * (N_ref/N)^alpha * phi, grams per wafer."""
    _check_positive("node_ratio", node_ratio)
    _check_positive("phi", phi)
    return k * die_area_mm2 * scaling.n_ref_steps * node_ratio**scaling.alpha * phi


def htf_usage(
    k: float, t_process_ref_hours: float, alpha: float, node_ratio: float, tdp_w: float
) -> float:
    """Heat-transfer-fluid usage: k * t_ref * (N_ref/N)^alpha * TDP."""
    _check_positive("node_ratio", node_ratio)
    if tdp_w < 0:
        raise InvalidValueError("tdp_w", f"must be >= 0, got {tdp_w}")
    return k * t_process_ref_hours * node_ratio**alpha * tdp_w


def area_only_usage(k: float, area_mm2: float) -> float:
    """k * area; dielectric passes die area, thinning passes wafer area."""
    if area_mm2 < 0:
        raise InvalidValueError("area_mm2", f"must be >= 0, got {area_mm2}")
    return k * area_mm2


def package_scaled_usage(
    k: float,
    n_solder_ref: float,
    package_size_mm2: float,
    package_size_ref_mm2: float,
    alpha: float,
) -> float:
    """Soldering usage: k * solder_steps_ref * (pkg / pkg_ref)^alpha."""
    if package_size_mm2 < 0:
        raise InvalidValueError("package_size_mm2", "must be >= 0")
    _check_positive("package_size_ref_mm2", package_size_ref_mm2)
    return k * n_solder_ref * (package_size_mm2 / package_size_ref_mm2) ** alpha


def step_only_usage(k: float, scaling: StepScaling, node_ratio: float) -> float:
    """k * steps_ref * (N_ref/N)^alpha, independent of any area."""
    return k * scaling.steps_at(node_ratio)


def packaging_usage(k: float, package_size_mm2: float) -> float:
    """k * package size; single-step, node-independent."""
    if package_size_mm2 < 0:
        raise InvalidValueError("package_size_mm2", "must be >= 0")
    return k * package_size_mm2


@dataclass(frozen=True)
class UsageContext:
    """Everything a usage formula can depend on for one evaluation."""

    die_area_mm2: float
    wafer_area_mm2: float
    node_ratio: float
    phi: float
    tdp_w: float
    package_size_mm2: float
    package_size_ref_mm2: float
    t_process_ref_hours: float
    # Extra multiplier folded into every node-scaled step count; carries
    # the storage capacity^beta sub-linearity, 1.0 otherwise.
    step_count_multiplier: float = 1.0


def usage_for_source(
    source: SourceId,
    k: float,
    alpha: float | None,
    n_ref_steps: float | None,
    ctx: UsageContext,
) -> float:
    """Dispatch one source to its formula family; returns grams per wafer."""
    family = SOURCE_FAMILY[source]
    phi = ctx.phi if source in LITH_FACTOR_SOURCES else 1.0

    if family in (UsageFamily.AREA_STEP, UsageFamily.NODE_STEPS):
        if alpha is None or n_ref_steps is None:
            raise ProfileError(f"source {source.value!r} requires alpha and a reference step count")
        scaling = StepScaling(n_ref_steps * ctx.step_count_multiplier, alpha)
        if family is UsageFamily.AREA_STEP:
            return area_step_usage(k, ctx.die_area_mm2, scaling, ctx.node_ratio, phi)
        return step_only_usage(k, scaling, ctx.node_ratio)

    if family is UsageFamily.PROCESS_TIME:
        if alpha is None:
            raise ProfileError(f"source {source.value!r} requires alpha")
        return htf_usage(k, ctx.t_process_ref_hours, alpha, ctx.node_ratio, ctx.tdp_w)

    if family is UsageFamily.DIE_AREA:
        return area_only_usage(k, ctx.die_area_mm2)

    if family is UsageFamily.WAFER_AREA:
        return area_only_usage(k, ctx.wafer_area_mm2)

    if family is UsageFamily.PACKAGE_STEPS:
        if alpha is None or n_ref_steps is None:
            raise ProfileError(f"source {source.value!r} requires alpha and a solder step count")
        return package_scaled_usage(
            k, n_ref_steps, ctx.package_size_mm2, ctx.package_size_ref_mm2, alpha
        )

    return packaging_usage(k, ctx.package_size_mm2)
