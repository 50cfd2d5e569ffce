"""End-to-end CLI behavior: subcommands, formats, exit codes, determinism."""

import json
import re

import pytest

from mvaudit.cli import main

P11 = 1.322065e-10
P14 = 5.151422e-8


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def fixture_arg(fixture_csv_path):
    return str(fixture_csv_path)


@pytest.fixture()
def bad_csv(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(
        "district_id,name,ballot_total,ballot_c1,mail_total,mail_c1,status\n"
        "1,A,1000,400,200,250,green\n",
        encoding="utf-8",
    )
    return str(path)


class TestAnalyze:
    def test_json_headline(self, capsys, fixture_arg):
        code, out, _ = run(capsys, "analyze", fixture_arg, "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["p_reversal"] == pytest.approx(P11, rel=1e-3)
        assert payload["dof"] == 105
        assert payload["n_green"] == 106 and payload["n_red"] == 11
        assert payload["reversal_threshold"] == 49911

    def test_json_variant_14(self, capsys, fixture_arg):
        code, out, _ = run(capsys, "analyze", fixture_arg, "--json", "--include-dubious")
        payload = json.loads(out)
        assert code == 0
        assert payload["variant"] == "M14"
        assert payload["dof"] == 102
        assert payload["p_reversal"] == pytest.approx(P14, rel=1e-3)

    def test_schema_stable_across_variants(self, capsys, fixture_arg):
        _, out_a, _ = run(capsys, "analyze", fixture_arg, "--json")
        _, out_b, _ = run(capsys, "analyze", fixture_arg, "--json", "--include-dubious")
        _, out_c, _ = run(capsys, "analyze", fixture_arg, "--json", "--level", "0.99")
        assert set(json.loads(out_a)) == set(json.loads(out_b)) == set(json.loads(out_c))

    def test_human_matches_json_to_seven_digits(self, capsys, fixture_arg):
        _, human, _ = run(capsys, "analyze", fixture_arg)
        _, as_json, _ = run(capsys, "analyze", fixture_arg, "--json")
        payload = json.loads(as_json)
        match = re.search(r"p\(reversal\)\s*:\s*([0-9.e+-]+)", human)
        assert match, human
        assert float(match.group(1)) == pytest.approx(payload["p_reversal"], rel=1e-7)
        assert f"log10 = {payload['log10_p_reversal']:.9g}" in human

    def test_deterministic_output(self, capsys, fixture_arg):
        _, out_a, _ = run(capsys, "analyze", fixture_arg, "--json")
        _, out_b, _ = run(capsys, "analyze", fixture_arg, "--json")
        assert out_a == out_b

    def test_interval_flag(self, capsys, fixture_arg):
        code, out, _ = run(capsys, "analyze", fixture_arg, "--json", "--level", "0.95")
        interval = json.loads(out)["prediction_interval"]
        assert code == 0
        assert interval["level"] == 0.95
        assert interval["lower"] < interval["upper"]

    def test_malformed_csv_exits_one(self, capsys, bad_csv):
        code, _, err = run(capsys, "analyze", bad_csv)
        assert code == 1
        assert "line 2" in err and "mail votes" in err

    def test_malformed_csv_json_error_object(self, capsys, bad_csv):
        code, out, _ = run(capsys, "analyze", bad_csv, "--json")
        assert code == 1
        payload = json.loads(out)
        assert payload["error"]["type"] == "data"

    def test_missing_file_exits_one(self, capsys):
        code, _, err = run(capsys, "analyze", "/no/such/file.csv")
        assert code == 1


class TestScenario:
    def test_default_votes_summary(self, capsys, fixture_arg, tmp_path):
        out_file = tmp_path / "mod.csv"
        code, out, _ = run(capsys, "scenario", fixture_arg, "--out", str(out_file))
        assert code == 0
        assert "moved 15432" in out
        assert "+1" in out

    def test_zero_votes_roundtrips_input(self, capsys, fixture_arg, tmp_path, fixture_csv_path):
        out_file = tmp_path / "same.csv"
        code, _, _ = run(capsys, "scenario", fixture_arg, "--votes", "0", "--out", str(out_file))
        assert code == 0
        assert out_file.read_bytes() == fixture_csv_path.read_bytes()

    def test_stdout_csv_with_summary_on_stderr(self, capsys, fixture_arg):
        code, out, err = run(capsys, "scenario", fixture_arg, "--votes", "0")
        assert code == 0
        assert out.startswith("district_id,name,")
        assert "moved 0" in err

    def test_oversized_request_fails(self, capsys, fixture_arg):
        code, _, err = run(capsys, "scenario", fixture_arg, "--votes", "99999999")
        assert code == 1
        assert "short by" in err

    def test_json_summary(self, capsys, fixture_arg):
        code, out, _ = run(capsys, "scenario", fixture_arg, "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["votes_moved_total"] == 15432
        assert payload["resulting_margin_c1_minus_c2"] == 1
        assert sum(payload["votes_moved"].values()) == 15432
        assert payload["csv"].startswith("district_id,name,")


class TestPlot:
    def test_emits_svg(self, capsys, fixture_arg, tmp_path):
        out_file = tmp_path / "fig1.svg"
        code, _, _ = run(capsys, "plot", fixture_arg, "--out", str(out_file))
        assert code == 0
        text = out_file.read_text(encoding="utf-8")
        assert text.count('class="pt green"') == 103
        assert text.count('class="pt green dubious"') == 3
        assert text.count('class="pt red"') == 11

    def test_scenario_plot(self, capsys, fixture_arg, tmp_path):
        out_file = tmp_path / "fig2.svg"
        code, _, _ = run(capsys, "plot", fixture_arg, "--votes", "15432", "--out", str(out_file))
        assert code == 0
        assert "modified results" in out_file.read_text(encoding="utf-8")

    def test_out_required(self, capsys, fixture_arg):
        with pytest.raises(SystemExit) as exc:
            main(["plot", fixture_arg])
        assert exc.value.code == 2


class TestCalibrate:
    def test_small_json_run_and_byte_identity(self, capsys, fixture_arg):
        args = ("calibrate", fixture_arg, "--reps", "120", "--seed", "7", "--json")
        code_a, out_a, _ = run(capsys, *args)
        code_b, out_b, _ = run(capsys, *args)
        assert code_a == code_b == 0
        assert out_a == out_b
        payload = json.loads(out_a)
        assert payload["replications"] == 120
        assert len(payload["t_stats"]) + payload["failed_replications"] == 120
        assert payload["dof"] == 105
        assert payload["clamped_fraction"] <= 0.001

    def test_too_few_reps_is_usage_error(self, fixture_arg):
        with pytest.raises(SystemExit) as exc:
            main(["calibrate", fixture_arg, "--reps", "99"])
        assert exc.value.code == 2

    def test_explicit_model_params(self, capsys, fixture_arg):
        code, out, _ = run(
            capsys, "calibrate", fixture_arg, "--reps", "100", "--seed", "1",
            "--k", "0.18", "--sigma", "7.0", "--json",
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["model_k"] == 0.18


class TestValidate:
    def test_fixture_shape(self, capsys, fixture_arg):
        code, out, _ = run(capsys, "validate", fixture_arg, "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["districts"] == 117
        assert payload["partition_default"] == [106, 11]
        assert payload["partition_include_dubious"] == [103, 14]
        assert payload["margin_official"] == 30863

    def test_human_mode(self, capsys, fixture_arg):
        code, out, _ = run(capsys, "validate", fixture_arg)
        assert code == 0
        assert "dataset OK" in out


class TestUsage:
    def test_missing_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_flag(self, fixture_arg):
        with pytest.raises(SystemExit) as exc:
            main(["analyze", fixture_arg, "--bogus"])
        assert exc.value.code == 2
