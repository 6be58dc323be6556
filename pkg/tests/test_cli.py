"""CLI contract: columns, exit codes, overrides, and byte-stable output."""

import json
import math
import os

import pytest

from su11parity.cli import main

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture(name):
    return os.path.join(FIXTURES, name)


def write_config(tmp_path, name="config.json", **overrides):
    config = {
        "state": {"family": "two_mode_vacuum"},
        "gain": {"g": 0.5, "theta": 0.0},
        "grid": {"start": 0.0, "stop": 2 * math.pi, "points": 361},
        "cutoff": {"n_max": "auto"},
        "output": {"path": str(tmp_path / "out.csv"), "format": "csv"},
    }
    config.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(config))
    return str(path)


def read_rows(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    data = [line.split(",") for line in lines[1:] if line and not line.startswith("#")]
    comments = [line for line in lines[1:] if line.startswith("#")]
    return header, data, comments


class TestSignal:
    def test_row_count_and_columns(self, tmp_path):
        out = tmp_path / "signal.csv"
        rc = main(["signal", "--config", fixture("vacuum_signal.json"),
                   "--output", str(out)])
        assert rc == 0
        header, data, comments = read_rows(out)
        assert header == ["phi_rad", "parity"]
        assert len(data) == 361
        assert comments == []

    def test_zero_gain_all_ones(self, tmp_path):
        out = tmp_path / "flat.csv"
        rc = main(["signal", "--config", fixture("vacuum_signal.json"),
                   "--set", "gain.g=0.0", "--output", str(out)])
        assert rc == 0
        _, data, _ = read_rows(out)
        assert all(row[1] == "1.0" for row in data)

    def test_fock_first_row_minus_one(self, tmp_path):
        out = tmp_path / "fock.csv"
        rc = main(["signal", "--config", fixture("vacuum_signal.json"),
                   "--set", "state.family=vacuum_fock", "--set", "state.n=1",
                   "--output", str(out)])
        assert rc == 0
        _, data, _ = read_rows(out)
        assert data[0][0] == "0.0"
        assert data[0][1] == "-1.0"

    def test_roundtrip_byte_identical(self, tmp_path):
        out = tmp_path / "a.csv"
        main(["signal", "--config", fixture("vacuum_signal.json"), "--output", str(out)])
        text = out.read_text()
        header, data, _ = read_rows(out)
        rebuilt = "\n".join([",".join(header)]
                            + [",".join(repr(float(cell)) for cell in row) for row in data]) + "\n"
        assert rebuilt == text

    def test_repeat_runs_identical(self, tmp_path):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        main(["signal", "--config", fixture("vacuum_signal.json"), "--output", str(first)])
        main(["signal", "--config", fixture("vacuum_signal.json"), "--output", str(second)])
        assert first.read_bytes() == second.read_bytes()

    def test_json_format(self, tmp_path):
        out = tmp_path / "signal.json"
        rc = main(["signal", "--config", fixture("vacuum_signal.json"),
                   "--output", str(out), "--format", "json"])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["columns"] == ["phi_rad", "parity"]
        assert len(payload["rows"]) == 361


class TestSensitivity:
    def test_summary_and_columns(self, tmp_path):
        out = tmp_path / "sens.csv"
        rc = main(["sensitivity", "--config", fixture("vacuum_sensitivity.json"),
                   "--output", str(out)])
        assert rc == 0
        header, data, comments = read_rows(out)
        assert header == ["phi_rad", "parity", "delta_phi"]
        assert len(data) == 400
        summary = {line.split(",")[0][2:]: line.split(",")[1]
                   for line in comments if "," in line}
        assert float(summary["delta_phi_min"]) == pytest.approx(0.8509181282393216, rel=0.01)
        dpm, hl = float(summary["delta_phi_min"]), float(summary["hl"])
        assert hl <= dpm or summary["below_hl"] == "true"

    def test_bad_points_names_field(self, tmp_path, capsys):
        config = write_config(tmp_path, grid={"start": 0.0, "stop": 1.0, "points": 1})
        rc = main(["sensitivity", "--config", config])
        assert rc == 2
        assert "grid.points" in capsys.readouterr().err

    def test_all_stationary_exit_4(self, tmp_path):
        config = write_config(tmp_path, grid={"start": 0.0, "stop": math.pi, "points": 2})
        assert main(["sensitivity", "--config", config]) == 4


class TestVerify:
    def test_vacuum_passes(self, tmp_path):
        out = tmp_path / "verify.csv"
        rc = main(["verify", "--config", fixture("vacuum_verify.json"),
                   "--output", str(out)])
        assert rc == 0
        header, data, comments = read_rows(out)
        assert header == ["check", "phi_rad", "closed_form", "oracle",
                          "abs_diff", "tolerance", "status"]
        checks = {row[0] for row in data}
        assert {"parity_vs_oracle", "unitary_equivalence", "measurement_equivalence"} <= checks
        assert all(row[6] == "PASS" for row in data)
        assert any(line.startswith("# result,PASS") for line in comments)

    def test_fock_variant_rows(self, tmp_path):
        out = tmp_path / "fock_verify.csv"
        rc = main(["verify", "--config", fixture("fock_verify.json"),
                   "--output", str(out)])
        assert rc == 0  # the shipped (sign-corrected) form passes
        _, data, _ = read_rows(out)
        printed = [row for row in data if row[0] == "fock_printed_form"]
        corrected = [row for row in data if row[0] == "parity_vs_oracle"]
        assert printed and corrected
        assert all(row[6] == "PASS" for row in corrected)
        assert all(row[6] == "FAIL" for row in printed)  # n = 1 is odd

    def test_cap_exceeded_exit_3(self, tmp_path, capsys):
        config = write_config(tmp_path, cutoff={"n_max": 200},
                              grid={"start": 0.1, "stop": 1.0, "points": 2})
        rc = main(["verify", "--config", config])
        assert rc == 3
        err = capsys.readouterr().err
        assert "cap" in err

    def test_json_mirror(self, tmp_path):
        out = tmp_path / "verify.json"
        rc = main(["verify", "--config", fixture("vacuum_verify.json"),
                   "--output", str(out), "--format", "json"])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["summary"]["passed"] is True
        assert payload["summary"]["equivalence_cutoff"] == 44


class TestConfigHandling:
    def test_unknown_key_named(self, tmp_path, capsys):
        config = write_config(tmp_path, tolerances={"oracle_tol": 1e-6, "bogus": 1})
        rc = main(["signal", "--config", config])
        assert rc == 2
        assert "tolerances.bogus" in capsys.readouterr().err

    def test_unknown_state_field_named(self, tmp_path, capsys):
        config = write_config(tmp_path, state={"family": "two_mode_vacuum", "alpha": 1})
        rc = main(["signal", "--config", config])
        assert rc == 2
        assert "state.alpha" in capsys.readouterr().err

    def test_missing_output_path(self, tmp_path, capsys):
        config = write_config(tmp_path, output={"format": "csv"})
        rc = main(["signal", "--config", config])
        assert rc == 2
        assert "output.path" in capsys.readouterr().err

    def test_amplitude_pair(self, tmp_path):
        out = tmp_path / "coh.csv"
        config = write_config(
            tmp_path,
            state={"family": "two_mode_coherent", "alpha": [0.8, 0.0], "beta": [0.0, 0.5]},
            grid={"start": 0.7, "stop": 0.8, "points": 2},
            output={"path": str(out), "format": "csv"})
        assert main(["signal", "--config", config]) == 0
        _, data, _ = read_rows(out)
        assert float(data[0][1]) == pytest.approx(0.263411081877298, abs=1e-7)

    def test_set_parses_json_values(self, tmp_path):
        out = tmp_path / "set.csv"
        config = write_config(tmp_path, grid={"start": 0.0, "stop": 1.0, "points": 5})
        rc = main(["signal", "--config", config, "--set", "grid.points=11",
                   "--output", str(out)])
        assert rc == 0
        _, data, _ = read_rows(out)
        assert len(data) == 11

    def test_invalid_set_syntax(self, tmp_path, capsys):
        config = write_config(tmp_path)
        rc = main(["signal", "--config", config, "--set", "gain.g"])
        assert rc == 2
        assert "key=value" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["signal", "--config", str(tmp_path / "nope.json")])
        assert rc == 2
