"""Embedded presets: profiles, specs, catalogs, and calibration fixtures.

Every preset is addressable from the CLI and the service as
``preset:<name>``.  Setting the ``FORGETMENOT_CONFIG_DIR`` environment
variable prepends a directory whose ``<name>.json`` / ``<name>.csv`` files
shadow the built-ins, so facilities can distribute their own presets
without code changes.
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
from pathlib import Path

from .errors import UnknownPresetError

CONFIG_DIR_ENV = "FORGETMENOT_CONFIG_DIR"

# ---------------------------------------------------------------------------
# Fab profiles
# ---------------------------------------------------------------------------

# Facility practices for the Hillsboro (Oregon) reference configuration.
# The release fraction is pinned at 0.9 because that factor reproduces the
# published per-source reference values; a facility that interprets its 0.9
# figure as a recovery factor should use "recovery_factor": 0.9 instead,
# which yields a release fraction of 0.1.
INTEL_OREGON_PAPER = {
    "name": "intel-oregon-paper",
    "notes": (
        "Reference profile for a 14 nm DUV baseline fab. release_fraction is "
        "0.9, matching the published worked per-source numbers; see README."
    ),
    "default_horizon": "y500",
    "geometry": {
        "wafer_diameter_mm": 150.0,
        "usable_fraction": 0.95,
        "yield_fraction": 0.8,
    },
    "release_fraction": 0.9,
    "lith_factors": {"duv": 1.0, "euv": 0.8, "euv_high_na": 0.7},
    "die_area_models": {
        "cpu": {"terms": {"cores": 4.5, "cache_mb": 0.4}, "constant_mm2": 0.0},
        "dram": {"terms": {"memory_gb": 0.9}, "constant_mm2": 30.0},
        "storage": {"terms": {}, "constant_mm2": 150.0},
    },
    "reference": {
        "node_nm": 14.0,
        "etching_steps": 20.0,
        "chamber_cleaning_steps": 15.0,
        "photolithography_steps": 25.0,
        "solvent_fluids_steps": 10.0,
        "testing_steps": 20.0,
        "vacuum_pumps_steps": 50.0,
        "plasma_coatings_steps": 10.0,
        "soldering_steps": 5.0,
        "process_time_hours": 20.0,
        "package_size_mm2": 4000.0,
    },
    "sources": {
        "etching": {
            "k_g_per_mm2_step": 0.005,
            "alpha": 0.5,
            "gwp": {"y500": 9928.0},
            "compounds": ["CF4", "C2F6", "CHF3"],
        },
        "chamber_cleaning": {
            "k_g_per_mm2_step": 0.003,
            "alpha": 0.5,
            "gwp": {"y500": 19550.0},
            "compounds": ["NF3", "SF6"],
        },
        "photolithography": {
            "k_g_per_mm2_step": 0.0007,
            "alpha": 1.0,
            "gwp": {"y500": 12356.0},
            "compounds": ["CHF3", "C4F8"],
        },
        "heat_transfer_fluids": {
            "k_g_per_hour_w": 0.0025,
            "alpha": 0.5,
            "gwp": {"y500": 9405.0},
            "compounds": ["C3F8", "C4F8"],
        },
        "solvent_fluids": {
            "k_g_per_mm2_step": 0.001,
            "alpha": 0.5,
            "gwp": {"y500": 13140.0},
            "compounds": ["C2F6", "NF3"],
        },
        "dielectric_fluids": {
            "k_g_per_mm2": 0.01,
            "gwp": {"y500": 9136.0},
            "compounds": ["C4F8", "CHF3"],
        },
        "wafer_thinning": {
            "k_g_per_mm2": 0.0002,
            "gwp": {"y500": 17490.0},
            "compounds": ["SF6", "CF4"],
        },
        "testing": {
            "k_g_per_mm2_step": 0.0001,
            "alpha": 1.0,
            "gwp": {"y500": 16285.0},
            "compounds": ["C3F8", "SF6"],
        },
        "vapor_phase_soldering": {
            "k_g_per_step": 0.4,
            "alpha": 1.0,
            "gwp": {"y500": 17140.0},
            "compounds": ["SF6"],
        },
        "vacuum_pumps": {
            "k_g_per_step": 0.02,
            "alpha": 0.8,
            "gwp": {"y500": 9264.0},
            "compounds": ["CF4", "C2F6"],
        },
        "plasma_coatings": {
            "k_g_per_mm2_step": 0.0001,
            "alpha": 1.0,
            "gwp": {"y500": 11000.0},
            "compounds": ["CHF3", "C4F8"],
        },
        "packaging": {
            "k_g_per_mm2": 0.0002,
            "gwp": {"y500": 18600.0},
            "compounds": ["SF6", "C3F8"],
        },
    },
}


def _template_from(profile_doc: dict, name: str, notes: str) -> dict:
    doc = copy.deepcopy(profile_doc)
    doc["name"] = name
    doc["notes"] = notes
    for entry in doc["sources"].values():
        for key in list(entry):
            if key.startswith("k_g_per_"):
                entry[key] = None
    return doc


# Structure and scaling exponents populated with reference defaults, base
# usage coefficients left null: fill them by hand or via `calibrate`.
NEUTRAL_TEMPLATE = _template_from(
    INTEL_OREGON_PAPER,
    "neutral-template",
    "Profile template: per-source base coefficients are null and must be "
    "filled (e.g. from a calibration run) before estimates can be made.",
)

# ---------------------------------------------------------------------------
# Hardware spec presets
# ---------------------------------------------------------------------------

FLAGSHIP_CPU = {
    "kind": "cpu",
    "node_nm": 7.0,
    "lithography": "euv",
    "features": {"cores": 112.0, "cache_mb": 168.0},
    "tdp_w": 300.0,
    "package_size_mm2": 2500.0,
}

MIDRANGE_CPU = {
    "kind": "cpu",
    "node_nm": 7.0,
    "lithography": "euv",
    "features": {"cores": 32.0, "cache_mb": 48.0},
    "tdp_w": 150.0,
    "package_size_mm2": 2000.0,
}

# ---------------------------------------------------------------------------
# Fixture catalog (synthetic values; see README for provenance caveats)
# ---------------------------------------------------------------------------


def _fixture_fab(name: str, gwp_by_horizon: dict) -> dict:
    """A catalog-local fab profile with horizon-uniform or per-horizon GWPs."""
    doc = copy.deepcopy(INTEL_OREGON_PAPER)
    doc["name"] = name
    doc["notes"] = "Synthetic fixture fab for the bundled component catalog."
    doc["die_area_models"] = {
        "cpu": {"terms": {"cores": 4.5, "cache_mb": 0.4}, "constant_mm2": 0.0},
        "dram": {"terms": {"memory_gb": 0.9}, "constant_mm2": 30.0},
        "storage": {"terms": {}, "constant_mm2": 150.0},
    }
    for source_name, entry in doc["sources"].items():
        entry["gwp"] = gwp_by_horizon[source_name]
    return doc


# Horizon-uniform GWPs: identical rankings across y20/y100/y500 by design.
_FIXTURE_UNIFORM_GWPS = {
    name: params["gwp"]["y500"] for name, params in INTEL_OREGON_PAPER["sources"].items()
}


def _component(
    cid: str,
    kind: str,
    vendor: str,
    generation: int,
    spec: dict,
    embodied: float,
    performance: float,
    attributes: dict | None = None,
) -> dict:
    return {
        "id": cid,
        "kind": kind,
        "vendor": vendor,
        "generation": generation,
        "spec": spec,
        "fab_profile": "fixture-fab",
        "embodied_carbon_gco2eq": embodied,
        "performance_score": performance,
        "attributes": attributes or {},
    }


def _cpu_spec(
    cores: float,
    cache_mb: float,
    node: float,
    lith: str,
    tdp: float,
    package_mm2: float = 2500.0,
) -> dict:
    return {
        "kind": "cpu",
        "node_nm": node,
        "lithography": lith,
        "features": {"cores": cores, "cache_mb": cache_mb},
        "tdp_w": tdp,
        "package_size_mm2": package_mm2,
    }


def _dram_spec(memory_gb: float, node: float) -> dict:
    return {
        "kind": "dram",
        "node_nm": node,
        "lithography": "euv",
        "features": {"memory_gb": memory_gb},
        "tdp_w": 8.0,
        "package_size_mm2": 600.0,
    }


def _storage_spec(capacity_tb: float, node: float) -> dict:
    return {
        "kind": "storage",
        "node_nm": node,
        "lithography": "duv",
        "features": {"capacity_tb": capacity_tb},
        "tdp_w": 10.0,
        "package_size_mm2": 800.0,
    }


FIXTURE_CATALOG = {
    "profiles": [_fixture_fab("fixture-fab", _FIXTURE_UNIFORM_GWPS)],
    "components": [
        # CPUs: generations 2-5, 14 nm DUV down to 7 nm EUV.
        _component(
            "cpu-g2-20c", "cpu", "intel", 2, _cpu_spec(20, 27.5, 14.0, "duv", 125.0),
            14500.0, 1.1,
        ),
        _component(
            "cpu-g3-24c", "cpu", "intel", 3, _cpu_spec(24, 36.0, 10.0, "euv", 165.0),
            16800.0, 1.5,
        ),
        _component(
            "cpu-g4-28c", "cpu", "intel", 4, _cpu_spec(28, 42.0, 7.0, "euv", 205.0),
            19400.0, 2.0,
        ),
        _component(
            "cpu-g5-32c", "cpu", "intel", 5, _cpu_spec(32, 60.0, 7.0, "euv", 250.0),
            21800.0, 2.6,
        ),
        _component(
            "cpu-g4-48c", "cpu", "amd", 4, _cpu_spec(48, 256.0, 7.0, "euv", 280.0),
            26500.0, 3.4,
        ),
        # DRAM: DDR4 and DDR5 at 32-64 GB.
        _component(
            "dram-ddr4-32g", "dram", "samsung", 4, _dram_spec(32.0, 16.0),
            5200.0, 0.55, {"memory_standard": "ddr4"},
        ),
        _component(
            "dram-ddr4-64g", "dram", "micron", 4, _dram_spec(64.0, 16.0),
            9100.0, 0.6, {"memory_standard": "ddr4"},
        ),
        _component(
            "dram-ddr5-48g", "dram", "skhynix", 5, _dram_spec(48.0, 12.0),
            6300.0, 0.95, {"memory_standard": "ddr5"},
        ),
        _component(
            "dram-ddr5-64g", "dram", "skhynix", 5, _dram_spec(64.0, 12.0),
            7800.0, 1.0, {"memory_standard": "ddr5"},
        ),
        # Storage: NVMe / SATA SSDs and HDDs.
        _component(
            "ssd-nvme-3.84t", "storage", "intel", 4, _storage_spec(3.84, 20.0),
            27600.0, 1.8, {"storage_interface": "nvme"},
        ),
        _component(
            "ssd-nvme-7.68t", "storage", "samsung", 5, _storage_spec(7.68, 20.0),
            41900.0, 2.0, {"storage_interface": "nvme"},
        ),
        _component(
            "ssd-sata-3.84t", "storage", "seagate", 4, _storage_spec(3.84, 20.0),
            26800.0, 1.1, {"storage_interface": "sata_ssd"},
        ),
        _component(
            "hdd-8t", "storage", "seagate", 3, _storage_spec(8.0, 28.0),
            4300.0, 0.35, {"storage_interface": "sata_hdd"},
        ),
        _component(
            "hdd-16t", "storage", "wdc", 4, _storage_spec(16.0, 28.0),
            6100.0, 0.4, {"storage_interface": "sata_hdd"},
        ),
    ],
}

# ---------------------------------------------------------------------------
# Synthetic calibration fixture
# ---------------------------------------------------------------------------

# The three production years deliberately span distinct nodes, lithography
# generations, TDPs, and package sizes so that every source's temporal
# signature is linearly independent and the 12-coefficient fit is exact.
CALIBRATION_SITE = {
    "latitude": 45.53,
    "longitude": -122.94,
    "units_produced_per_year": {"2020": 240000.0, "2021": 310000.0, "2022": 285000.0},
    "product_specs": {
        "2020": _cpu_spec(28, 42.0, 10.0, "duv", 205.0, 2000.0),
        "2021": _cpu_spec(32, 60.0, 7.0, "euv", 250.0, 2500.0),
        "2022": _cpu_spec(48, 96.0, 5.0, "euv_high_na", 280.0, 3200.0),
    },
}


def _calibration_records_csv() -> str:
    """Generate the bundled release-record fixture deterministically.

    Facility rows carry exactly the masses the reference profile would
    release, inflated by the neighbor-field mean so that the baseline
    subtraction recovers the true attributable mass.
    """
    from .calibration import parse_site, released_compound_masses
    from .profile import parse_profile

    profile = parse_profile(copy.deepcopy(INTEL_OREGON_PAPER))
    site = parse_site(copy.deepcopy(CALIBRATION_SITE))
    lines = ["lat,lon,year,compound,mass_g"]
    # Two neighbor emitters inside the 10-mile radius, one outside it.
    neighbor_masses = [1800.0, 3400.0]
    neighbor_mean = sum(neighbor_masses) / len(neighbor_masses)
    for year in sorted(site.units_produced_per_year):
        masses = released_compound_masses(profile, site, year)
        for compound in sorted(masses):
            facility_mass = masses[compound] + neighbor_mean
            lines.append(
                f"{site.latitude!r},{site.longitude!r},{year},{compound},{facility_mass!r}"
            )
            lines.append(f"45.58,-122.90,{year},{compound},{neighbor_masses[0]!r}")
            lines.append(f"45.47,-122.99,{year},{compound},{neighbor_masses[1]!r}")
            # 60+ miles away: must be ignored by the radius query.
            lines.append(f"46.5,-123.8,{year},{compound},99999.0")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_JSON_PRESETS: dict[str, dict[str, dict]] = {
    "profile": {
        "intel-oregon-paper": INTEL_OREGON_PAPER,
        "neutral-template": NEUTRAL_TEMPLATE,
    },
    "spec": {
        "flagship-cpu": FLAGSHIP_CPU,
        "midrange-cpu": MIDRANGE_CPU,
    },
    "catalog": {
        "fixture-catalog": FIXTURE_CATALOG,
    },
    "site": {
        "calibration-site": CALIBRATION_SITE,
    },
    "levers": {
        "levers-example": [
            {"type": "clean_etch_rebalance", "clean_step_multiplier": 0.5, "etch_step_multiplier": 1.5},
            {"type": "recovery_change", "release_fraction": 0.05},
        ],
    },
}

_TEXT_PRESET_BUILDERS = {
    ("records", "calibration-records"): _calibration_records_csv,
}

PRESET_PREFIX = "preset:"


def is_preset_ref(value: str) -> bool:
    return value.startswith(PRESET_PREFIX)


def _config_dir_file(name: str, suffix: str) -> Path | None:
    config_dir = os.environ.get(CONFIG_DIR_ENV)
    if not config_dir:
        return None
    candidate = Path(config_dir) / f"{name}{suffix}"
    return candidate if candidate.is_file() else None


def preset_names(kind: str) -> list[str]:
    names = set(_JSON_PRESETS.get(kind, ()))
    names.update(name for (k, name) in _TEXT_PRESET_BUILDERS if k == kind)
    return sorted(names)


def load_preset_json(kind: str, name: str) -> dict:
    """Resolve a JSON preset, honoring the config-dir override."""
    override = _config_dir_file(name, ".json")
    if override is not None:
        return json.loads(override.read_text(encoding="utf-8"))
    try:
        return copy.deepcopy(_JSON_PRESETS[kind][name])
    except KeyError:
        known = ", ".join(preset_names(kind)) or "none"
        raise UnknownPresetError(f"unknown {kind} preset {name!r} (known: {known})")


def load_preset_text(kind: str, name: str) -> str:
    override = _config_dir_file(name, ".csv")
    if override is not None:
        return override.read_text(encoding="utf-8")
    builder = _TEXT_PRESET_BUILDERS.get((kind, name))
    if builder is None:
        known = ", ".join(preset_names(kind)) or "none"
        raise UnknownPresetError(f"unknown {kind} preset {name!r} (known: {known})")
    return builder()


def content_hash(payload) -> str:
    """Stable sha256 over the canonical JSON form of a payload."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def preset_index() -> list[dict]:
    """Inventory of embedded presets with content hashes, for /v1/presets."""
    entries = []
    for kind in sorted(_JSON_PRESETS):
        for name in sorted(_JSON_PRESETS[kind]):
            entries.append(
                {
                    "kind": kind,
                    "name": name,
                    "content_hash": content_hash(_JSON_PRESETS[kind][name]),
                }
            )
    for kind, name in sorted(_TEXT_PRESET_BUILDERS):
        entries.append(
            {
                "kind": kind,
                "name": name,
                "content_hash": content_hash(_TEXT_PRESET_BUILDERS[(kind, name)]()),
            }
        )
    return entries
