import copy
import json

import pytest

from forgetmenot.errors import ProfileError, SchemaError
from forgetmenot.presets import INTEL_OREGON_PAPER
from forgetmenot.engine import released_mass_per_unit_per_k
from forgetmenot.profile import parse_profile, profile_to_json
from forgetmenot.units import GwpHorizon
from forgetmenot.usage import DEFAULT_SOURCE_GWP_Y500, SourceId


def _doc():
    return copy.deepcopy(INTEL_OREGON_PAPER)


class TestParsing:
    def test_reference_profile_loads(self, oregon_profile):
        assert oregon_profile.name == "intel-oregon-paper"
        assert oregon_profile.release.release_fraction == 0.9
        assert oregon_profile.reference.node_nm == 14.0
        assert oregon_profile.geometry.diameter_mm == 150.0
        assert set(oregon_profile.sources) == set(SourceId)

    def test_unknown_top_level_key(self):
        doc = _doc()
        doc["color"] = "green"
        with pytest.raises(SchemaError, match="color"):
            parse_profile(doc)

    def test_unknown_source_key(self):
        doc = _doc()
        doc["sources"]["etching"]["frequency"] = 3
        with pytest.raises(SchemaError, match="frequency"):
            parse_profile(doc)

    def test_wrong_unit_field_name_rejected(self):
        doc = _doc()
        entry = doc["sources"]["etching"]
        entry["k_g_per_mm2"] = entry.pop("k_g_per_mm2_step")
        with pytest.raises(SchemaError, match="k_g_per_mm2"):
            parse_profile(doc)

    def test_release_and_recovery_are_exclusive(self):
        doc = _doc()
        doc["recovery_factor"] = 0.9
        with pytest.raises(SchemaError, match="release_fraction"):
            parse_profile(doc)

    def test_recovery_factor_converts(self):
        doc = _doc()
        del doc["release_fraction"]
        doc["recovery_factor"] = 0.9
        profile = parse_profile(doc)
        assert profile.release.release_fraction == pytest.approx(0.1)

    def test_missing_source_rejected(self):
        doc = _doc()
        del doc["sources"]["packaging"]
        with pytest.raises(ProfileError, match="packaging"):
            parse_profile(doc)

    def test_alpha_on_alphaless_source_rejected(self):
        doc = _doc()
        doc["sources"]["packaging"]["alpha"] = 0.5
        with pytest.raises(SchemaError, match="alpha"):
            parse_profile(doc)

    def test_uses_lith_factor_only_on_lithography_sources(self):
        doc = _doc()
        doc["sources"]["testing"]["uses_lith_factor"] = True
        with pytest.raises(SchemaError, match="uses_lith_factor"):
            parse_profile(doc)

    def test_gwp_and_mix_are_exclusive(self):
        doc = _doc()
        doc["sources"]["etching"]["gwp_mix"] = {"CF4": 1.0}
        with pytest.raises(SchemaError, match="gwp"):
            parse_profile(doc)

    def test_bare_number_gwp_is_horizon_uniform(self):
        doc = _doc()
        doc["sources"]["etching"]["gwp"] = 9928.0
        profile = parse_profile(doc)
        for horizon in GwpHorizon:
            assert profile.gwp_for(SourceId.ETCHING, horizon) == 9928.0

    def test_mix_resolves_against_compound_table(self):
        doc = _doc()
        doc["compounds"] = [
            {"id": "CF4", "gwp": {"y500": 7380.0}},
            {"id": "SF6", "gwp": {"y500": 25200.0}},
        ]
        doc["sources"]["etching"].pop("gwp")
        doc["sources"]["etching"]["gwp_mix"] = {"CF4": 1.0, "SF6": 1.0}
        profile = parse_profile(doc)
        assert profile.gwp_for(SourceId.ETCHING, GwpHorizon.Y500) == pytest.approx(16290.0)

    def test_mix_without_table_is_profile_error(self):
        doc = _doc()
        doc["sources"]["etching"].pop("gwp")
        doc["sources"]["etching"]["gwp_mix"] = {"CF4": 1.0}
        profile = parse_profile(doc)
        with pytest.raises(ProfileError, match="compound table"):
            profile.gwp_for(SourceId.ETCHING, GwpHorizon.Y500)


class TestRoundTrip:
    def test_source_gwps_round_trip_bit_exactly(self, oregon_profile):
        doc = profile_to_json(oregon_profile)
        reparsed = parse_profile(json.loads(json.dumps(doc)))
        for source in SourceId:
            assert (
                reparsed.gwp_for(source, GwpHorizon.Y500)
                == DEFAULT_SOURCE_GWP_Y500[source]
            )

    def test_full_round_trip_preserves_evaluation(self, oregon_profile, flagship_spec):
        from forgetmenot.engine import total_emission

        reparsed = parse_profile(json.loads(json.dumps(profile_to_json(oregon_profile))))
        assert total_emission(flagship_spec, reparsed) == total_emission(
            flagship_spec, oregon_profile
        )

    def test_template_round_trip_keeps_nulls(self):
        from forgetmenot.presets import NEUTRAL_TEMPLATE

        template = parse_profile(copy.deepcopy(NEUTRAL_TEMPLATE))
        reparsed = parse_profile(profile_to_json(template))
        assert reparsed.unfilled_sources() == list(SourceId)


class TestStorageStepScaling:
    def _storage_spec(self, capacity):
        from forgetmenot.geometry import parse_spec

        return parse_spec(
            {
                "kind": "storage",
                "node_nm": 20.0,
                "lithography": "duv",
                "features": {"capacity_tb": capacity},
                "tdp_w": 10.0,
                "package_size_mm2": 800.0,
            }
        )

    def test_step_sources_scale_with_capacity_exponent(self, oregon_profile):
        per_k_small = released_mass(oregon_profile, self._storage_spec(4.0))
        per_k_large = released_mass(oregon_profile, self._storage_spec(16.0))
        # Step-scaled sources grow as capacity^0.5: 16/4 -> factor 2.
        assert per_k_large / per_k_small == pytest.approx(2.0, rel=1e-9)

    def test_exponent_zero_disables_scaling(self, oregon_profile):
        from dataclasses import replace

        flat = replace(oregon_profile, storage_step_exponent=0.0)
        small = released_mass(flat, self._storage_spec(4.0))
        large = released_mass(flat, self._storage_spec(16.0))
        assert large == pytest.approx(small, rel=1e-12)


def released_mass(profile, spec):
    return released_mass_per_unit_per_k(spec, profile, SourceId.ETCHING)
