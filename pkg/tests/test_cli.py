import csv
import json

import numpy as np
import pytest

from config.constants import ExitCodes
from core.app import ExperimentApp
from core.errors import ConfigError
from core.input_manager import InputManager


def run(*argv: str) -> int:
    return ExperimentApp().run(list(argv))


def read_rows(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


class TestExitCodes:
    def test_thresholds(self, tmp_path):
        out = tmp_path / "thresholds.csv"
        assert run("thresholds", "--out", str(out)) == ExitCodes.SUCCESS
        rows = read_rows(out)
        assert [row["name"] for row in rows] == ["mu", "diagonal_bound", "peano_baker"]
        assert float(rows[0]["c_star"]) == pytest.approx(2.13834, abs=1e-5)

    def test_invalid_c_writes_nothing(self, tmp_path):
        out = tmp_path / "analyze.csv"
        assert run("analyze", "--c", "0.0", "--out", str(out)) == ExitCodes.VALIDATION
        assert not out.exists()

    def test_stable_c_rejected_by_smoothing_audit(self, tmp_path):
        out = tmp_path / "smooth.csv"
        assert run("smooth", "--c", "2.0", "--out", str(out)) == ExitCodes.VALIDATION
        assert not out.exists()

    def test_too_many_terms(self, tmp_path):
        assert run("peano-baker", "--terms", "61", "--out", str(tmp_path / "pb.csv")) == ExitCodes.VALIDATION

    def test_unknown_command(self):
        assert run("paint") == ExitCodes.VALIDATION

    def test_step_above_limit(self, tmp_path):
        assert run("analyze", "--epsilon", "0.1", "--step", "0.05", "--out", str(tmp_path / "a.csv")) \
            == ExitCodes.VALIDATION

    def test_overflow_is_a_runtime_failure(self, tmp_path):
        out = tmp_path / "trajectory.csv"
        assert run("trajectory", "--c", "10", "--horizon", "2000", "--out", str(out)) == ExitCodes.RUNTIME_FAILURE
        assert not out.exists()

    def test_horizon_must_be_whole_periods(self, tmp_path):
        assert run("nonperiodic", "--horizon", "9", "--out", str(tmp_path / "n.csv")) == ExitCodes.VALIDATION


class TestReports:
    def test_analyze_row(self, tmp_path):
        out = tmp_path / "analyze.csv"
        assert run("analyze", "--c", "3", "--out", str(out)) == ExitCodes.SUCCESS
        header = out.read_text(encoding="utf-8").splitlines()[0]
        assert header == "c,mu1,mu2,principal_exponent,p11,p12,p21,p22"
        (row,) = read_rows(out)
        assert float(row["mu1"]) > 1.0
        assert float(row["p12"]) == float(row["p21"])

    def test_line_endings(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run("sweep", "--points", "5", "--out", str(out)) == ExitCodes.SUCCESS
        raw = out.read_bytes()
        assert b"\r\n" not in raw
        assert raw.endswith(b"\n")
        assert len(raw.splitlines()) == 6

    def test_json_nulls_for_empty_cone(self, tmp_path):
        out = tmp_path / "sweep.json"
        argv = ("sweep", "--c-min", "1.0", "--c-max", "3.0", "--points", "3", "--format", "json", "--out", str(out))
        assert run(*argv) == ExitCodes.SUCCESS
        document = json.loads(out.read_text(encoding="utf-8"))
        assert document["command"] == "sweep"
        assert document["columns"] == ["c", "mu1", "cone_lo", "cone_hi", "pb_lower_bound"]
        assert document["rows"][0]["cone_lo"] is None
        assert document["rows"][2]["cone_lo"] > 0.0

    @pytest.mark.parametrize("argv", [
        ("analyze", "--c", "3"),
        ("thresholds",),
        ("sweep", "--points", "3"),
        ("trajectory", "--c", "3", "--horizon", "4", "--dt", "0.5"),
        ("directions", "--c", "3", "--horizon", "1", "--dt", "0.1"),
        ("peano-baker", "--c", "3", "--terms", "10"),
        ("smooth", "--c", "3", "--epsilon", "0.05"),
        ("nonperiodic", "--c", "3", "--horizon", "10", "--dt", "0.5"),
    ], ids=lambda argv: argv[0])
    def test_deterministic(self, tmp_path, argv):
        first, second = tmp_path / "one.csv", tmp_path / "two.csv"
        for out in (first, second):
            assert run(*argv, "--out", str(out)) == ExitCodes.SUCCESS
        assert first.read_bytes() == second.read_bytes()

    def test_stdout_without_out(self, capsys):
        assert run("sweep", "--points", "2") == ExitCodes.SUCCESS
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "c,mu1,cone_lo,cone_hi,pb_lower_bound"
        assert len(lines) == 3

    def test_trajectory_defaults_to_principal_solution(self, tmp_path):
        out = tmp_path / "trajectory.csv"
        assert run("trajectory", "--c", "3", "--horizon", "4", "--dt", "0.5", "--out", str(out)) == ExitCodes.SUCCESS
        rows = read_rows(out)
        assert len(rows) == 9
        assert float(rows[0]["norm"]) == pytest.approx(1.0)
        assert float(rows[4]["t"]) == pytest.approx(2.0)
        assert float(rows[8]["norm"]) == pytest.approx(float(rows[4]["norm"]) ** 2, rel=1e-10)

    def test_directions(self, tmp_path):
        out = tmp_path / "directions.csv"
        assert run("directions", "--c", "3", "--horizon", "1", "--dt", "0.1", "--out", str(out)) == ExitCodes.SUCCESS
        rows = read_rows(out)
        assert len(rows) == 11
        assert float(rows[0]["theta"]) == 0.0
        assert float(rows[0]["sigma"]) == pytest.approx(-1.0 / 12.0)

    def test_peano_baker_rows(self, tmp_path):
        out = tmp_path / "pb.csv"
        assert run("peano-baker", "--c", "6.5", "--terms", "1", "--out", str(out)) == ExitCodes.SUCCESS
        rows = read_rows(out)
        assert [int(row["K"]) for row in rows] == [0, 1]
        assert float(rows[1]["lambda1"]) == pytest.approx(1.0 + 6.5 + 1.0 / 26.0)

    def test_smooth_single_epsilon(self, tmp_path):
        out = tmp_path / "smooth.csv"
        assert run("smooth", "--c", "3", "--epsilon", "0.05", "--out", str(out)) == ExitCodes.SUCCESS
        (row,) = read_rows(out)
        assert float(row["error"]) <= float(row["bound"])
        assert float(row["mu_eps"]) > 1.0

    def test_nonperiodic(self, tmp_path):
        out = tmp_path / "nonperiodic.csv"
        argv = ("nonperiodic", "--c", "3", "--horizon", "10", "--dt", "0.5", "--out", str(out))
        assert run(*argv) == ExitCodes.SUCCESS
        rows = read_rows(out)
        assert len(rows) == 21
        for row in rows:
            assert float(row["v1"]) >= float(row["w1"]) - 1e-12
            assert float(row["v2"]) >= float(row["w2"]) - 1e-12


class TestConfiguration:
    def test_document_with_flag_override(self, tmp_path):
        document = tmp_path / "config.json"
        document.write_text(json.dumps({"c": 2.5, "K": 5}), encoding="utf-8")
        out = tmp_path / "pb.csv"
        assert run("peano-baker", "--config", str(document), "--terms", "3", "--out", str(out)) == ExitCodes.SUCCESS
        rows = read_rows(out)
        assert len(rows) == 4
        assert float(rows[1]["lambda1"]) == pytest.approx(1.0 + 2.5 + 0.1)

    def test_unknown_document_key(self, tmp_path):
        document = tmp_path / "config.json"
        document.write_text(json.dumps({"step_size": 4}), encoding="utf-8")
        assert run("thresholds", "--config", str(document)) == ExitCodes.VALIDATION
        with pytest.raises(ConfigError) as info:
            InputManager.load_document(str(document))
        assert info.value.field == "step_size"

    def test_document_type_errors(self, tmp_path):
        document = tmp_path / "config.json"
        document.write_text(json.dumps({"terms": "many"}), encoding="utf-8")
        with pytest.raises(ConfigError):
            InputManager.load_document(str(document))
        with pytest.raises(ConfigError):
            InputManager.load_document(str(tmp_path / "missing.json"))

    def test_random_initial_value_is_seeded(self, tmp_path):
        first, second = tmp_path / "one.csv", tmp_path / "two.csv"
        for out in (first, second):
            argv = ("trajectory", "--x0", "random", "--seed", "7", "--horizon", "2", "--dt", "0.5", "--out", str(out))
            assert run(*argv) == ExitCodes.SUCCESS
        assert first.read_bytes() == second.read_bytes()

        expected = np.random.default_rng(7).uniform(0.0, 1.0, size=2)
        row = read_rows(first)[0]
        assert float(row["x1"]) == float(expected[0])
        assert float(row["x2"]) == float(expected[1])

    def test_explicit_initial_value(self, tmp_path):
        out = tmp_path / "trajectory.csv"
        assert run("trajectory", "--x0", "0.3,0.4", "--horizon", "1", "--dt", "0.5", "--out", str(out)) \
            == ExitCodes.SUCCESS
        assert float(read_rows(out)[0]["norm"]) == pytest.approx(0.5)
        assert run("trajectory", "--x0", "0.3;0.4", "--horizon", "1") == ExitCodes.VALIDATION

    def test_tabulated_drift_document(self, tmp_path):
        document = tmp_path / "config.json"
        document.write_text(json.dumps({
            "c": 3.0, "horizon": 10.0, "dt": 1.0,
            "drift": {"times": [0.0, 10.0], "values": [0.05, 0.2]},
        }), encoding="utf-8")
        out = tmp_path / "nonperiodic.csv"
        assert run("nonperiodic", "--config", str(document), "--out", str(out)) == ExitCodes.SUCCESS
        assert len(read_rows(out)) == 11
