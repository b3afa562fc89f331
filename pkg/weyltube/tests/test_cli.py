"""Tests for the command line: dispatch, output formats and exit codes."""

import importlib
import math

import orjson
import pytest

import weyltube
from weyltube.cli import build_parser, main
from weyltube.config.settings import get_settings


def write_scenario(tmp_path, **overrides):
    payload = {
        "manifold": {"name": "sphere", "params": {"R": 2.0}},
        "domain": {"kind": "interval"},
        "radii": [0.1, 0.2],
    }
    payload.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_bytes(orjson.dumps(payload))
    return path


class TestParser:
    def test_requires_command(self):
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 2

    def test_mc_requires_seed(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["tube", "mc", "--manifold", "sphere", "--kind", "interval", "--radius", "0.1"])

    def test_domain_arguments(self):
        args = build_parser().parse_args(
            ["domain", "check-symmetric", "--kind", "radial2d", "--target-n", "2", "--p", "3", "--q", "16", "--n", "2"]
        )
        assert (args.target_n, args.p, args.q, args.n) == (2, 3, 16, 2)

    def test_invalid_threads(self, capsys, monkeypatch):
        monkeypatch.setenv("WEYLTUBE_THREADS", "1")
        assert main(["--threads", "999", "group", "check-degree", "--type", "I2", "--k", "5"]) == 2
        assert "threads" in capsys.readouterr().err

    def test_invalid_environment_reaches_the_command_line(self, capsys, monkeypatch):
        monkeypatch.setenv("WEYLTUBE_THREADS", "0")
        get_settings.cache_clear()
        importlib.reload(weyltube)
        assert main(["group", "check-degree", "--type", "I2", "--k", "5"]) == 2
        assert "error: threads:" in capsys.readouterr().err


class TestTubeRun:
    def test_report_on_stdout(self, tmp_path, capsys):
        assert main(["tube", "run", str(write_scenario(tmp_path))]) == 0
        report = orjson.loads(capsys.readouterr().out)
        shell = 4 * math.pi / 3 * (2.2**3 - 1.8**3)
        assert report["extrinsic"]["volumes"][0] == pytest.approx(shell, rel=1e-9)
        assert report["intrinsic"]["volumes"][0] == pytest.approx(shell, rel=1e-9)
        assert report["verdict"]["criterion"] == "rotational"

    def test_output_is_deterministic(self, tmp_path):
        scenario = write_scenario(tmp_path)
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        assert main(["tube", "run", str(scenario), "--output", str(first)]) == 0
        assert main(["tube", "run", str(scenario), "--output", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_csv_output(self, tmp_path):
        csv = tmp_path / "volumes.csv"
        out = tmp_path / "report.json"
        assert main(["tube", "run", str(write_scenario(tmp_path)), "--output", str(out), "--csv", str(csv)]) == 0
        lines = csv.read_text().splitlines()
        assert lines[0] == "radius,V_extrinsic,V_intrinsic,V_mc,stderr"
        assert len(lines) == 3

    def test_negative_radius(self, tmp_path, capsys):
        code = main(["tube", "run", str(write_scenario(tmp_path, radii=[-0.1]))])
        assert code == 2
        assert "radii" in capsys.readouterr().err

    def test_radius_beyond_reach(self, tmp_path, capsys):
        code = main(["tube", "run", str(write_scenario(tmp_path, radii=[3.0]))])
        assert code == 2
        assert "error: radii:" in capsys.readouterr().err

    def test_missing_scenario(self, tmp_path, capsys):
        assert main(["tube", "run", str(tmp_path / "absent.json")]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_monte_carlo_seed_override(self, tmp_path, capsys):
        scenario = write_scenario(
            tmp_path,
            manifold={"name": "sphere", "params": {"R": 1.0}},
            radii=[0.2],
            paths=["extrinsic", "monte_carlo"],
            mc={"samples": 20_000, "seed": 1},
        )
        assert main(["tube", "run", str(scenario), "--seed", "21"]) == 0
        report = orjson.loads(capsys.readouterr().out)
        assert report["monte_carlo"][0]["seed"] == 21

    def test_not_intrinsic_note(self, tmp_path, capsys):
        scenario = write_scenario(
            tmp_path,
            manifold={"name": "clifford_torus", "params": {}},
            domain={"kind": "cone_ball", "m": 2, "b": 0.5},
            radii=[0.05],
        )
        assert main(["tube", "run", str(scenario)]) == 0
        captured = capsys.readouterr()
        assert orjson.loads(captured.out)["verdict"]["intrinsic"] is False
        assert "not guaranteed intrinsic" in captured.err


class TestTubeMonteCarlo:
    def test_sphere(self, capsys):
        code = main(
            ["tube", "mc", "--manifold", "sphere", "--kind", "interval", "--radius", "0.2",
             "--samples", "50000", "--seed", "1"]
        )
        assert code == 0
        estimates = orjson.loads(capsys.readouterr().out)
        assert len(estimates) == 1
        assert estimates[0]["seed"] == 1
        shell = 4 * math.pi / 3 * (1.2**3 - 0.8**3)
        assert abs(estimates[0]["estimate"] - shell) <= 5 * estimates[0]["stderr"]

    def test_bad_params(self, capsys):
        code = main(
            ["tube", "mc", "--manifold", "sphere", "--params", "{R: 2}", "--kind", "interval",
             "--radius", "0.2", "--seed", "1"]
        )
        assert code == 2
        assert "params" in capsys.readouterr().err


class TestGroupCommand:
    def test_dihedral_seven(self, capsys):
        assert main(["group", "check-degree", "--type", "I2", "--k", "7"]) == 0
        assert capsys.readouterr().out.strip() == "6"

    def test_json(self, capsys):
        assert main(["group", "check-degree", "--type", "B", "--m", "3", "--json"]) == 0
        report = orjson.loads(capsys.readouterr().out)
        assert report["order"] == 48
        assert report["orthogonal_degree"] == report["predicted"] == 3

    def test_out_of_scope(self, capsys):
        assert main(["group", "check-degree", "--type", "E6"]) == 2
        assert "E6" in capsys.readouterr().err


class TestDomainCommands:
    @pytest.mark.parametrize("n, prefix", [(3, "true"), (4, "false worst_alpha=")])
    def test_square_symmetry(self, n, prefix, capsys):
        assert main(["domain", "check-symmetric", "--kind", "cube", "--m", "2", "--n", str(n)]) == 0
        assert capsys.readouterr().out.startswith(prefix)

    def test_counterexample(self, capsys):
        args = ["domain", "check-symmetric", "--kind", "radial2d", "--target-n", "2", "--p", "3", "--q", "16",
                "--n", "2", "--json"]
        assert main(args) == 0
        check = orjson.loads(capsys.readouterr().out)
        assert check["symmetric"] is True
        assert check["m"] == 2

    def test_counterexample_constraint(self, capsys):
        args = ["domain", "check-symmetric", "--kind", "radial2d", "--target-n", "2", "--p", "2", "--q", "16",
                "--n", "2"]
        assert main(args) == 2
        assert "p > n" in capsys.readouterr().err

    def test_moments(self, capsys):
        assert main(["domain", "moments", "--kind", "cube", "--m", "2", "--degree", "2"]) == 0
        table = orjson.loads(capsys.readouterr().out)
        assert table["exact"] is True
        assert table["moments"]["0,0"] == "4"
        assert table["moments"]["2,0"] == "4/3"


class TestVerifyCommand:
    def test_verify_paper_command(self, capsys):
        args = build_parser().parse_args(["tube", "verify-paper", "--quick"])
        assert args.quick
        assert main(["tube", "verify-paper", "--quick", "--filter", "square"]) == 0
        assert "3 passed, 0 failed" in capsys.readouterr().out

    def test_square_checks(self, capsys):
        assert main(["tube", "verify", "--quick", "--filter", "square"]) == 0
        assert "3 passed, 0 failed" in capsys.readouterr().out

    def test_json_summary(self, tmp_path, capsys):
        path = tmp_path / "summary.json"
        code = main(["tube", "verify", "--quick", "--filter", "fourfold", "--format", "json", "--json", str(path)])
        assert code == 0
        summary = orjson.loads(capsys.readouterr().out)
        assert [c["status"] for c in summary["checks"]] == ["pass", "pass"]
        assert orjson.loads(path.read_bytes()) == summary


class TestCurvatureCommand:
    def test_sphere_residuals(self, capsys):
        assert main(["curvature", "--manifold", "sphere", "--params", '{"R": 2.0}']) == 0
        report = orjson.loads(capsys.readouterr().out)
        assert report["gauss_residual"] < 1e-8
        assert report["scalar_min"] == pytest.approx(0.5)
        assert report["scalar_max"] == pytest.approx(0.5)
