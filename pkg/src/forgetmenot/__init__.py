"""Fluorinated-compound emission modeling for hardware manufacturing.

The package estimates per-source fluorinated ("forever chemical")
emissions for a hardware design at a fabrication facility, supports
what-if levers and coefficient calibration from public release records,
and ranks CPU/DRAM/storage assemblies by total manufacturing emissions
(embodied carbon plus fluorinated).
"""

__version__ = "0.1.0"

from .errors import (
    CalibrationError,
    CatalogError,
    EmissionModelError,
    InvalidValueError,
    LeverError,
    MissingFeatureError,
    MissingHorizonError,
    ProfileError,
    SchemaError,
    UnknownCompoundError,
    UnknownPresetError,
    ZeroWeightMixError,
)
from .units import (
    CompoundMix,
    CompoundRegistry,
    FluorinatedCompound,
    GwpHorizon,
    blended_gwp,
    default_registry,
    grams_to_co2eq,
    load_registry,
    mmtce,
)
from .geometry import (
    DieAreaModel,
    HardwareKind,
    HardwareSpec,
    Lithography,
    WaferGeometry,
    die_area,
    parse_spec,
    wafer_area,
    wafers_per_unit,
)
from .usage import (
    LithographyFactor,
    SourceId,
    StepScaling,
    area_only_usage,
    area_step_usage,
    htf_usage,
    package_scaled_usage,
    packaging_usage,
    step_only_usage,
    usage_for_source,
)
from .profile import (
    FabProfile,
    ReferenceHardware,
    ReleaseConvention,
    SourceGwp,
    SourceParams,
    parse_profile,
    profile_to_json,
)
from .engine import (
    ComparisonReport,
    EmissionBreakdown,
    SourceEmission,
    breakdown_from_json,
    compare_to_measured,
    source_emission,
    total_emission,
)
from .scenario import (
    CleanEtchRebalance,
    CoreCacheInterchange,
    LithographySwitch,
    LowGwpSubstitution,
    ReclaimLoop,
    RecoveryChange,
    ScenarioReport,
    apply_lever,
    parse_levers,
    run_scenario,
)
from .calibration import (
    BaselineMode,
    CalibrationResult,
    EmissionRecord,
    FacilitySite,
    baseline_subtract,
    calibrate_from_records,
    fit_base_coefficients,
    haversine_miles,
    parse_records_csv,
    parse_site,
)
from .catalog import (
    Assembly,
    AttributeConstraint,
    Catalog,
    Component,
    RankReport,
    RankStabilityReport,
    ServerClass,
    custom_server_class,
    enumerate_assemblies,
    pareto_front,
    parse_catalog,
    parse_constraints,
    rank_assemblies,
    rank_stability,
    server_class,
)
from .reporting import Normalization, SweepAxis, TrendSweep, export, sweep

__all__ = [name for name in dir() if not name.startswith("_")]
