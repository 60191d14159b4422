import json
import random
from dataclasses import replace

import pytest

from forgetmenot.engine import total_emission
from forgetmenot.errors import LeverError, SchemaError
from forgetmenot.geometry import DieAreaModel, HardwareKind, Lithography, die_area
from forgetmenot.profile import ReleaseConvention, SourceGwp
from forgetmenot.scenario import (
    CleanEtchRebalance,
    CoreCacheInterchange,
    LithographySwitch,
    LowGwpSubstitution,
    ReclaimLoop,
    RecoveryChange,
    apply_lever,
    parse_levers,
    run_scenario,
)
from forgetmenot.usage import SourceId

CPU_MODEL = DieAreaModel(terms={"cores": 4.5, "cache_mb": 0.4})


class TestCoreCacheInterchange:
    def test_published_example(self, midrange_spec, oregon_profile):
        lever = CoreCacheInterchange(delta_cores=-10, delta_cache_mb=16)
        new_spec, new_profile = apply_lever(midrange_spec, oregon_profile, lever)
        assert new_spec.feature("cores") == 22
        assert new_spec.feature("cache_mb") == 64
        assert die_area(midrange_spec, CPU_MODEL) == pytest.approx(163.2)
        assert die_area(new_spec, CPU_MODEL) == pytest.approx(124.6)
        assert new_profile is oregon_profile

    def test_inputs_untouched(self, midrange_spec, oregon_profile):
        apply_lever(midrange_spec, oregon_profile, CoreCacheInterchange(-10, 16))
        assert midrange_spec.feature("cores") == 32

    def test_requires_cpu(self, oregon_profile, midrange_spec):
        dram_spec = replace(
            midrange_spec, kind=HardwareKind.DRAM, features={"memory_gb": 32.0}
        )
        with pytest.raises(LeverError, match="CPU"):
            apply_lever(dram_spec, oregon_profile, CoreCacheInterchange(-1, 0))

    def test_negative_features_rejected(self, midrange_spec, oregon_profile):
        with pytest.raises(LeverError, match="cores"):
            apply_lever(midrange_spec, oregon_profile, CoreCacheInterchange(-64, 0))


class TestLeverLocality:
    def test_identity_levers_are_bit_identical(self, flagship_spec, oregon_profile):
        identity_levers = [
            CoreCacheInterchange(0, 0),
            CleanEtchRebalance(1.0, 1.0),
            RecoveryChange(ReleaseConvention(oregon_profile.release.release_fraction)),
            ReclaimLoop(net_multiplier=1.0),
            LithographySwitch(flagship_spec.lithography),
            LowGwpSubstitution(
                SourceId.CHAMBER_CLEANING,
                oregon_profile.source(SourceId.CHAMBER_CLEANING).gwp,
                step_multiplier=1.0,
            ),
        ]
        report = run_scenario(flagship_spec, oregon_profile, identity_levers)
        assert report.modified == report.baseline
        assert report.total_delta_gco2eq == 0.0

    def test_rebalance_touches_only_two_sources(self, flagship_spec, oregon_profile):
        report = run_scenario(
            flagship_spec, oregon_profile, [CleanEtchRebalance(0.5, 1.5)]
        )
        deltas = report.per_source_delta()
        for source in SourceId:
            if source in (SourceId.ETCHING, SourceId.CHAMBER_CLEANING):
                assert deltas[source] != 0.0
            else:
                assert deltas[source] == 0.0
                assert report.modified.row(source) == report.baseline.row(source)

    def test_litho_switch_never_increases(self, oregon_profile, flagship_spec):
        duv_spec = replace(flagship_spec, lithography=Lithography.DUV)
        report = run_scenario(duv_spec, oregon_profile, [LithographySwitch(Lithography.EUV)])
        for source, delta in report.per_source_delta().items():
            assert delta <= 0.0, source

    def test_reclaim_default_affected_set(self, flagship_spec, oregon_profile):
        lever = ReclaimLoop(net_multiplier=0.5)
        assert set(lever.resolved_sources(oregon_profile)) == {
            SourceId.ETCHING,
            SourceId.CHAMBER_CLEANING,
            SourceId.SOLVENT_FLUIDS,
            SourceId.VACUUM_PUMPS,
        }
        report = run_scenario(flagship_spec, oregon_profile, [lever])
        deltas = report.per_source_delta()
        for source in lever.resolved_sources(oregon_profile):
            assert report.modified.emission(source) == pytest.approx(
                0.5 * report.baseline.emission(source), rel=1e-12
            )
        for source in set(SourceId) - set(lever.resolved_sources(oregon_profile)):
            assert deltas[source] == 0.0

    def test_low_gwp_substitution(self, flagship_spec, oregon_profile):
        lever = LowGwpSubstitution(
            SourceId.CHAMBER_CLEANING, SourceGwp.fixed(9000.0), step_multiplier=1.25
        )
        report = run_scenario(flagship_spec, oregon_profile, [lever])
        before = report.baseline.row(SourceId.CHAMBER_CLEANING)
        after = report.modified.row(SourceId.CHAMBER_CLEANING)
        assert after.gwp == 9000.0
        assert after.usage_g_per_wafer == pytest.approx(
            1.25 * before.usage_g_per_wafer, rel=1e-12
        )
        others = set(SourceId) - {SourceId.CHAMBER_CLEANING}
        for source in others:
            assert report.per_source_delta()[source] == 0.0


class TestScenarioAlgebra:
    def test_empty_lever_list(self, flagship_spec, oregon_profile):
        report = run_scenario(flagship_spec, oregon_profile, [])
        assert report.total_delta_gco2eq == 0.0
        assert report.modified == report.baseline

    def test_halving_release_halves_total(self, flagship_spec, oregon_profile):
        profile = oregon_profile.with_release(ReleaseConvention(0.10))
        report = run_scenario(
            flagship_spec, profile, [RecoveryChange(ReleaseConvention(0.05))]
        )
        assert report.total_delta_percent == pytest.approx(-50.0, rel=1e-9)

    def test_rebalance_delta_matches_algebra(self, flagship_spec, oregon_profile):
        baseline = total_emission(flagship_spec, oregon_profile)
        e_etch = baseline.emission(SourceId.ETCHING)
        e_clean = baseline.emission(SourceId.CHAMBER_CLEANING)
        rng = random.Random(20_240_517)
        for _ in range(100):
            c = rng.uniform(1e-6, 2.0)
            e = rng.uniform(1e-6, 2.0)
            report = run_scenario(flagship_spec, oregon_profile, [CleanEtchRebalance(c, e)])
            expected = (e - 1.0) * e_etch + (c - 1.0) * e_clean
            assert report.total_delta_gco2eq == pytest.approx(expected, rel=1e-9, abs=1e-6)

    def test_rebalance_sign_predicate(self, flagship_spec, oregon_profile):
        baseline = total_emission(flagship_spec, oregon_profile)
        e_etch = baseline.emission(SourceId.ETCHING)
        e_clean = baseline.emission(SourceId.CHAMBER_CLEANING)
        c, e = 0.5, 1.5
        reduces = e_clean > e_etch * (e - 1.0) / (1.0 - c)
        report = run_scenario(flagship_spec, oregon_profile, [CleanEtchRebalance(c, e)])
        assert (report.total_delta_gco2eq < 0) == reduces

    def test_levers_compose_left_to_right(self, flagship_spec, oregon_profile):
        levers = [
            CleanEtchRebalance(0.5, 1.5),
            RecoveryChange(ReleaseConvention(0.45)),
        ]
        report = run_scenario(flagship_spec, oregon_profile, levers)
        spec1, profile1 = apply_lever(flagship_spec, oregon_profile, levers[0])
        spec2, profile2 = apply_lever(spec1, profile1, levers[1])
        assert report.modified == total_emission(spec2, profile2)

    def test_repeated_application_is_pure(self, flagship_spec, oregon_profile):
        lever = CleanEtchRebalance(0.7, 1.3)
        first = run_scenario(flagship_spec, oregon_profile, [lever])
        second = run_scenario(flagship_spec, oregon_profile, [lever])
        assert first.modified == second.modified

    def test_invalid_lever_names_index(self, flagship_spec, oregon_profile):
        levers = [
            CleanEtchRebalance(0.5, 1.5),
            CoreCacheInterchange(-1000, 0),
        ]
        with pytest.raises(LeverError, match=r"lever\[1\]"):
            run_scenario(flagship_spec, oregon_profile, levers)


class TestLeverDocuments:
    def test_parse_all_types(self):
        doc = [
            {"type": "core_cache_interchange", "delta_cores": -10, "delta_cache_mb": 16},
            {"type": "clean_etch_rebalance", "clean_step_multiplier": 0.5,
             "etch_step_multiplier": 1.5},
            {"type": "low_gwp_substitution", "target": "chamber_cleaning",
             "gwp": 9000.0, "step_multiplier": 1.25},
            {"type": "recovery_change", "recovery_factor": 0.95},
            {"type": "reclaim_loop", "net_multiplier": 0.5},
            {"type": "lithography_switch", "to": "euv"},
        ]
        levers = parse_levers(json.dumps(doc))
        assert isinstance(levers[0], CoreCacheInterchange)
        assert isinstance(levers[1], CleanEtchRebalance)
        assert isinstance(levers[2], LowGwpSubstitution)
        assert levers[3].release.release_fraction == pytest.approx(0.05)
        assert isinstance(levers[4], ReclaimLoop)
        assert levers[5].to is Lithography.EUV

    def test_round_trip(self):
        doc = [
            {"type": "clean_etch_rebalance", "clean_step_multiplier": 0.5,
             "etch_step_multiplier": 1.5},
        ]
        levers = parse_levers(doc)
        assert levers[0].to_json_dict() == doc[0]

    def test_unknown_type_rejected(self):
        with pytest.raises(SchemaError, match="unknown lever type"):
            parse_levers([{"type": "magic"}])

    def test_unknown_key_rejected(self):
        with pytest.raises(SchemaError, match="speed"):
            parse_levers([{"type": "lithography_switch", "to": "euv", "speed": 11}])
