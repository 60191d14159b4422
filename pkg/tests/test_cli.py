import json

import pytest

from forgetmenot.cli import main
from forgetmenot.engine import total_emission
from forgetmenot.presets import FLAGSHIP_CPU, INTEL_OREGON_PAPER
from forgetmenot.profile import parse_profile
from forgetmenot.geometry import parse_spec


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEstimate:
    def test_matches_direct_module_call(self, capsys):
        code, out, err = run_cli(
            capsys,
            "estimate",
            "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper",
        )
        assert code == 0
        direct = total_emission(parse_spec(FLAGSHIP_CPU), parse_profile(INTEL_OREGON_PAPER))
        assert json.loads(out) == direct.to_json_dict()

    def test_deterministic_bytes(self, capsys):
        _, first, _ = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper",
        )
        _, second, _ = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper",
        )
        assert first == second

    def test_missing_profile_file_exits_2(self, capsys):
        code, out, err = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "no-such-file.json",
        )
        assert code == 2
        assert "no-such-file.json" in err
        assert out == ""

    def test_domain_error_exits_1(self, capsys, tmp_path):
        bad_spec = tmp_path / "spec.json"
        bad_spec.write_text(json.dumps({
            "kind": "cpu", "node_nm": -3, "lithography": "euv", "features": {},
        }))
        code, out, err = run_cli(
            capsys, "estimate", "--spec", str(bad_spec),
            "--profile", "preset:intel-oregon-paper",
        )
        assert code == 1
        assert "node_nm" in err

    def test_unknown_flag_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, "estimate", "--nope")
        assert code == 2

    def test_unknown_preset_exits_1(self, capsys):
        code, _, err = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:bogus",
        )
        assert code == 1
        assert "bogus" in err

    def test_out_file_and_quiet_stdout(self, capsys, tmp_path):
        out_path = tmp_path / "b.json"
        code, out, _ = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper", "--out", str(out_path),
        )
        assert code == 0
        assert out == ""
        assert json.loads(out_path.read_text())["total_gco2eq"] > 0

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper", "--format", "csv",
        )
        assert code == 0
        assert out.splitlines()[0] == "source,usage_g,wafers,release,gwp,gco2eq"

    def test_plot_writes_figure(self, capsys, tmp_path):
        plot = tmp_path / "b.png"
        code, _, err = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper", "--plot", str(plot),
        )
        assert code == 0
        assert plot.stat().st_size > 0
        assert str(plot) in err  # diagnostics on stderr only


class TestScenario:
    def test_empty_levers(self, capsys, tmp_path):
        levers = tmp_path / "levers.json"
        levers.write_text("[]")
        code, out, _ = run_cli(
            capsys, "scenario", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper", "--levers", str(levers),
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["total_delta_gco2eq"] == 0.0
        assert all(v == 0.0 for v in payload["per_source_delta_gco2eq"].values())

    def test_recovery_halving(self, capsys, tmp_path):
        profile_doc = dict(INTEL_OREGON_PAPER)
        profile_doc = json.loads(json.dumps(profile_doc))
        profile_doc["release_fraction"] = 0.10
        profile_path = tmp_path / "profile.json"
        profile_path.write_text(json.dumps(profile_doc))
        levers = tmp_path / "levers.json"
        levers.write_text(json.dumps([
            {"type": "recovery_change", "release_fraction": 0.05},
        ]))
        code, out, _ = run_cli(
            capsys, "scenario", "--spec", "preset:flagship-cpu",
            "--profile", str(profile_path), "--levers", str(levers),
        )
        assert code == 0
        assert json.loads(out)["total_delta_percent"] == pytest.approx(-50.0, rel=1e-9)

    def test_preset_levers(self, capsys):
        code, out, _ = run_cli(
            capsys, "scenario", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper", "--levers", "preset:levers-example",
        )
        assert code == 0
        assert json.loads(out)["levers"][0]["type"] == "clean_etch_rebalance"


class TestCalibrate:
    def test_fixture_round_trip(self, capsys):
        code, out, err = run_cli(
            capsys, "calibrate",
            "--records", "preset:calibration-records",
            "--site", "preset:calibration-site",
            "--template", "preset:neutral-template",
        )
        assert code == 0
        payload = json.loads(out)
        truth = {
            name: next(v for k, v in entry.items() if k.startswith("k_g_per_"))
            for name, entry in INTEL_OREGON_PAPER["sources"].items()
        }
        for name, fitted in payload["coefficients"].items():
            assert fitted == pytest.approx(truth[name], rel=1e-6), name
        assert payload["residual_rms_relative"] < 1e-9

    def test_empty_records_exits_1(self, capsys, tmp_path):
        records = tmp_path / "records.csv"
        records.write_text("lat,lon,year,compound,mass_g\n")
        code, _, err = run_cli(
            capsys, "calibrate", "--records", str(records),
            "--site", "preset:calibration-site",
            "--template", "preset:neutral-template",
        )
        assert code == 1
        assert "no records" in err

    def test_emit_profile(self, capsys, tmp_path):
        out_profile = tmp_path / "filled.json"
        code, _, _ = run_cli(
            capsys, "calibrate",
            "--records", "preset:calibration-records",
            "--site", "preset:calibration-site",
            "--template", "preset:neutral-template",
            "--emit-profile", str(out_profile),
        )
        assert code == 0
        filled = parse_profile(json.loads(out_profile.read_text()))
        assert filled.unfilled_sources() == []


class TestAssemble:
    def test_general_purpose_ranking(self, capsys):
        code, out, _ = run_cli(
            capsys, "assemble", "--catalog", "preset:fixture-catalog",
            "--class", "general_purpose",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["count"] == 100
        assert payload["lowest"]["total_gco2eq"] < payload["highest"]["total_gco2eq"]

    def test_pareto_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "assemble", "--catalog", "preset:fixture-catalog",
            "--class", "general_purpose", "--pareto",
        )
        payload = json.loads(out)
        assert code == 0
        assert len(payload["pareto_front"]) > 0

    def test_horizons_stability(self, capsys):
        code, out, _ = run_cli(
            capsys, "assemble", "--catalog", "preset:fixture-catalog",
            "--class", "general_purpose", "--horizons", "y20,y100,y500",
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["stable"] is True

    def test_rejecting_class_exits_1(self, capsys, tmp_path):
        doc = json.loads(json.dumps(dict(__import__("forgetmenot.presets", fromlist=["FIXTURE_CATALOG"]).FIXTURE_CATALOG)))
        doc["components"] = [c for c in doc["components"] if c["kind"] != "cpu" or c["id"] == "cpu-g2-20c"]
        catalog = tmp_path / "catalog.json"
        catalog.write_text(json.dumps(doc))
        code, _, err = run_cli(
            capsys, "assemble", "--catalog", str(catalog), "--class", "compute_optimized",
        )
        assert code == 1
        assert "no feasible assembly" in err


class TestValidate:
    def test_identical_files_zero_diffs(self, capsys, tmp_path):
        _, breakdown_json, _ = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper",
        )
        breakdown_path = tmp_path / "b.json"
        breakdown_path.write_text(breakdown_json)
        payload = json.loads(breakdown_json)
        measured = {
            row["source"]: row["emission_gco2eq"] for row in payload["sources"]
        }
        measured_path = tmp_path / "m.json"
        measured_path.write_text(json.dumps(measured))
        code, out, _ = run_cli(
            capsys, "validate", "--breakdown", str(breakdown_path),
            "--measured", str(measured_path),
        )
        assert code == 0
        report = json.loads(out)
        assert report["max_abs_pct_diff"] == 0.0
        assert report["skipped"] == []

    def test_missing_source_listed_as_skipped(self, capsys, tmp_path):
        _, breakdown_json, _ = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper",
        )
        breakdown_path = tmp_path / "b.json"
        breakdown_path.write_text(breakdown_json)
        measured_path = tmp_path / "m.json"
        measured_path.write_text(json.dumps({"etching": 24560.0}))
        code, out, _ = run_cli(
            capsys, "validate", "--breakdown", str(breakdown_path),
            "--measured", str(measured_path),
        )
        assert code == 0
        assert "packaging" in json.loads(out)["skipped"]


class TestSweepCommand:
    def test_node_sweep_csv(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper",
            "--axis", "node_nm", "--values", "14,10,7,5", "--format", "csv",
        )
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 5
        totals = [float(line.split(",")[-1]) for line in lines[1:]]
        assert totals == sorted(totals)

    def test_bad_values_exit_2(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper",
            "--axis", "node_nm", "--values", "14,abc",
        )
        assert code == 2
        assert "--values" in err


class TestConfigDirOverride:
    def test_config_dir_shadows_builtin(self, capsys, tmp_path, monkeypatch):
        custom = json.loads(json.dumps(FLAGSHIP_CPU))
        custom["features"]["cores"] = 16.0
        custom["features"]["cache_mb"] = 24.0
        (tmp_path / "flagship-cpu.json").write_text(json.dumps(custom))
        monkeypatch.setenv("FORGETMENOT_CONFIG_DIR", str(tmp_path))
        code, out, _ = run_cli(
            capsys, "estimate", "--spec", "preset:flagship-cpu",
            "--profile", "preset:intel-oregon-paper",
        )
        assert code == 0
        assert json.loads(out)["spec"]["features"]["cores"] == 16.0
