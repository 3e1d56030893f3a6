import os
import sys

import orjson
import pytest

# 确保项目根目录在 sys.path 中
CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.dirname(CURRENT_DIR)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from holobrack.cli import EXIT_ERROR, EXIT_OK, RunConfig, build_parser, load_run_config, main


def _run_json(tmp_path, argv, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, orjson.loads(out.read_bytes()), out


@pytest.mark.cli
class TestScenarios:
    def test_brackets(self, tmp_path):
        code, data, _ = _run_json(tmp_path, ["brackets", "--a", "2", "--phi", "0.5236"])
        assert code == EXIT_OK
        assert data["passed"] is True
        assert data["dirac"]["x,Px"] == pytest.approx(0.535714, abs=1e-5)
        assert data["theta"]["rank"] == 4

    def test_spectrum_wall_unit_scale(self, tmp_path):
        code, data, _ = _run_json(tmp_path, ["spectrum-wall", "--unit-scale", "-n", "4"])
        assert code == EXIT_OK
        energies = [level["energy"] for level in data["levels"]]
        assert energies == pytest.approx([2.338107, 4.087949, 5.520560, 6.786708], abs=1e-6)
        assert isinstance(data["levels"], list)
        for level in data["levels"]:
            assert set(level) >= {"rank", "energy", "parity", "root_family", "root_index", "norm_sq"}
        assert set(data) >= {"scenario", "checks", "passed", "levels"}

    def test_spectrum_wedge(self, tmp_path):
        code, data, _ = _run_json(tmp_path, ["spectrum-wedge", "-n", "4"])
        assert code == EXIT_OK
        assert [level["parity"] for level in data["levels"]] == ["even", "odd", "even", "odd"]
        assert all("closed_form_norm_sq" in level for level in data["levels"])

    def test_classical_zero_duration(self, tmp_path):
        out = tmp_path / "traj.csv"
        code = main(["classical", "--t-end", "0", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_bytes().split(b"\n")
        assert lines[-1] == b""
        assert len(lines) == 3
        assert lines[0].startswith(b"t,x,y,theta,chi1,chi2,Px")
        assert b"\r" not in out.read_bytes()
        report = orjson.loads((tmp_path / "traj.report.json").read_bytes())
        assert report["iterations"] == 3
        assert report["multipliers"]["1"]["value"] == pytest.approx(-6.3)

    def test_classical_json(self, tmp_path):
        code, data, _ = _run_json(tmp_path, ["classical", "--t-end", "1", "--format", "json"])
        assert code == EXIT_OK
        assert data["final"]["x"] == pytest.approx(1.75, rel=1e-9)
        assert data["checks"]["constraint_drift"]["passed"] is True

    def test_wavefunction(self, tmp_path):
        out = tmp_path / "psi.csv"
        code = main(["wavefunction", "--potential", "wedge", "--level", "2", "--points", "11", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "x,psi,density"
        assert len(lines) == 12

    def test_quantize(self, tmp_path):
        code, data, _ = _run_json(tmp_path, ["quantize", "--hbar", "0.5"])
        assert code == EXIT_OK
        assert data["momentum_rank"] == 1
        assert data["reduced"]["kinetic"] == pytest.approx(1.4)

    def test_stdout(self, capsysbinary):
        code = main(["spectrum-wall", "--unit-scale", "-n", "1"])
        assert code == EXIT_OK
        data = orjson.loads(capsysbinary.readouterr().out)
        assert data["levels"][0]["energy"] == pytest.approx(2.338107, abs=1e-6)


@pytest.mark.cli
class TestDeterminism:
    @pytest.mark.parametrize("argv", [["brackets"], ["spectrum-wedge", "-n", "3"], ["quantize"]])
    def test_byte_identical(self, tmp_path, argv):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(argv + ["--out", str(first)]) == EXIT_OK
        assert main(argv + ["--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()


@pytest.mark.cli
class TestConfiguration:
    def test_flags_override_file(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_bytes(orjson.dumps({"ball": {"a": 0.0, "phi": 0.5}, "n_max": 2}))
        args = build_parser().parse_args(["spectrum-wall", "--config", str(config), "-n", "3", "--phi", "0.7"])
        run_config = load_run_config(args)
        assert isinstance(run_config, RunConfig)
        assert run_config.n_max == 3
        assert run_config.ball.a == 0.0
        assert run_config.ball.phi == 0.7

    def test_invalid_angle(self):
        assert main(["brackets", "--phi", "2.0"]) == EXIT_ERROR

    def test_zero_force(self):
        assert main(["spectrum-wall", "--phi", "0"]) == EXIT_ERROR

    def test_csv_for_json_scenario(self):
        assert main(["brackets", "--format", "csv"]) == EXIT_ERROR

    def test_missing_config_file(self, tmp_path):
        assert main(["brackets", "--config", str(tmp_path / "missing.json")]) == EXIT_ERROR

    def test_unknown_field_in_file(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_bytes(orjson.dumps({"n_levels": 2}))
        assert main(["spectrum-wall", "--config", str(config)]) == EXIT_ERROR

    def test_unknown_scenario(self):
        with pytest.raises(SystemExit):
            main(["bogus"])
