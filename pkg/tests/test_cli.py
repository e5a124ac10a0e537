import numpy as np
import pytest
import yaml

from halfwave.cli import main
from halfwave.grids import Field, Grid, write_field_binary


def write_yaml(path, payload):
    path.write_text(yaml.safe_dump(payload))


@pytest.fixture(scope="module")
def solve_cfg(tmp_path_factory):
    # small but resolved enough that all certificates pass quickly
    path = tmp_path_factory.mktemp("cfg") / "solve.yaml"
    write_yaml(
        path,
        {"grid": {"n_points": 2048}, "solver": {"restarts": 1, "seed": 0}},
    )
    return path


@pytest.fixture(scope="module")
def solved_run(solve_cfg, tmp_path_factory):
    out = tmp_path_factory.mktemp("run") / "artifacts"
    code = main(["solve", "--config", str(solve_cfg), "--out", str(out)])
    return code, out


class TestSolveCommand:
    def test_exit_zero_and_artifacts(self, solved_run):
        code, out = solved_run
        assert code == 0
        for name in (
            "config_resolved.yaml",
            "report.yaml",
            "trace.csv",
            "u.bin",
            "v.bin",
            "u.csv",
            "v.csv",
        ):
            assert (out / name).exists()

    def test_report_contents(self, solved_run):
        _, out = solved_run
        report = yaml.safe_load((out / "report.yaml").read_text())
        assert report["converged"] is True
        assert report["level_bound"]["passed"] is True
        assert report["residuals"]["pohozaev"] <= 1e-3
        assert report["residuals"]["nehari"] <= 1e-6

    def test_resolved_config_reproduces(self, solved_run, tmp_path):
        _, out = solved_run
        code = main(
            ["solve", "--config", str(out / "config_resolved.yaml"), "--out", str(tmp_path / "re")]
        )
        assert code == 0
        first = (out / "trace.csv").read_bytes()
        again = (tmp_path / "re" / "trace.csv").read_bytes()
        assert first == again

    def test_determinism_bit_identical_csvs(self, solve_cfg, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        assert main(["solve", "--config", str(solve_cfg), "--out", str(a), "--seed", "3"]) == 0
        assert main(["solve", "--config", str(solve_cfg), "--out", str(b), "--seed", "3"]) == 0
        for name in ("trace.csv", "u.csv", "v.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_invalid_grid_exits_two(self, tmp_path, capsys):
        cfg = tmp_path / "bad.yaml"
        write_yaml(cfg, {"grid": {"n_points": 8}})
        code = main(["solve", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "n_points" in capsys.readouterr().err

    def test_unknown_key_exits_two(self, tmp_path, capsys):
        cfg = tmp_path / "typo.yaml"
        write_yaml(cfg, {"solver": {"max_outter": 3}})
        code = main(["solve", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "max_outter" in capsys.readouterr().err

    def test_forced_failure_keeps_artifacts(self, tmp_path):
        cfg = tmp_path / "force.yaml"
        write_yaml(
            cfg,
            {
                "grid": {"n_points": 1024},
                "solver": {
                    "max_outer": 1,
                    "restarts": 1,
                    "newton_polish": False,
                    "outer_tol": 1e-14,
                },
            },
        )
        out = tmp_path / "forced"
        code = main(["solve", "--config", str(cfg), "--out", str(out)])
        assert code == 1
        assert (out / "u.bin").exists()
        report = yaml.safe_load((out / "report.yaml").read_text())
        assert report["converged"] is False


class TestDiagnoseCommand:
    def test_zero_fields_report_zero(self, tmp_path, capsys):
        g = Grid(40.0, 256)
        z = Field(g, np.zeros(256))
        upath = tmp_path / "u.bin"
        vpath = tmp_path / "v.bin"
        write_field_binary(z, upath)
        write_field_binary(z, vpath)
        code = main(
            [
                "diagnose",
                "--u",
                str(upath),
                "--v",
                str(vpath),
                "--out",
                str(tmp_path / "rep"),
            ]
        )
        assert code == 0
        report = yaml.safe_load((tmp_path / "rep" / "report.yaml").read_text())
        assert all(v == 0.0 for v in report.values())

    def test_roundtrip_on_solved_fields(self, solved_run, tmp_path):
        _, out = solved_run
        code = main(
            [
                "diagnose",
                "--u",
                str(out / "u.bin"),
                "--v",
                str(out / "v.bin"),
                "--out",
                str(tmp_path / "rep2"),
            ]
        )
        assert code == 0
        report = yaml.safe_load((tmp_path / "rep2" / "report.yaml").read_text())
        assert report["pohozaev"] <= 1e-3
        assert report["euler_lagrange_u"] <= 1e-6


class TestMoserCommand:
    def test_csv_shape(self, tmp_path):
        cfg = tmp_path / "m.yaml"
        write_yaml(cfg, {"grid": {"n_points": 8192}, "moser": {"n_list": [4, 16, 64], "r1": 2.0}})
        out = tmp_path / "m"
        code = main(["moser", "--config", str(cfg), "--out", str(out)])
        assert code == 0
        rows = (out / "moser.csv").read_text().strip().split("\n")
        assert rows[0] == "n,n_points,seminorm_sq,rel_err_vs_pi,l2_sq,l2_sq_exact"
        data = [r.split(",") for r in rows[1:]]
        finest = [r for r in data if int(r[1]) == 8192]
        assert {int(r[0]) for r in finest} == {4, 16, 64}
        # the sharp-threshold deficit is real: seminorms sit below pi
        assert all(float(r[2]) < np.pi for r in data)


class TestAuditCommand:
    def test_default_family_passes(self, tmp_path):
        out = tmp_path / "aud"
        code = main(["audit", "--out", str(out)])
        assert code == 0
        rows = (out / "audit.csv").read_text().strip().split("\n")[1:]
        assert len(rows) == 13
        assert all(",pass," in row for row in rows)

    def test_subcritical_family_fails(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        write_yaml(cfg, {"family": {"name": "cubic"}})
        code = main(["audit", "--config", str(cfg), "--out", str(tmp_path / "aud2")])
        assert code == 1


class TestSweepCommand:
    def test_sweep_artifacts(self, tmp_path):
        cfg = tmp_path / "s.yaml"
        write_yaml(
            cfg,
            {
                "grid": {"length": 80.0, "n_points": 4096},
                "potential": {"type": "single_well", "V0": 1.0, "Vinf": 2.0},
                "solver": {"restarts": 1, "seed": 0},
                "theta": {"theta_list": [1.0, 2.0]},
            },
        )
        out = tmp_path / "sw"
        code = main(["sweep", "--config", str(cfg), "--out", str(out), "--dump-fields"])
        assert code == 0
        rows = (out / "sweep.csv").read_text().strip().split("\n")
        assert rows[0] == "epsilon,level,x_eps,dist_to_L,gap12,profile_drift"
        assert len(rows) == 5
        summary = yaml.safe_load((out / "sweep_summary.yaml").read_text())
        assert summary["levels_in_window"] is True
        assert summary["theta_strictly_increasing"] is True
        assert (out / "theta.csv").exists()
        assert (out / "u_eps_0.125.bin").exists()

    def test_box_too_small_fails(self, tmp_path, capsys):
        cfg = tmp_path / "s2.yaml"
        write_yaml(
            cfg,
            {
                "grid": {"length": 40.0, "n_points": 2048},
                "potential": {"type": "single_well"},
                "solver": {"restarts": 1},
            },
        )
        code = main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "sw2")])
        assert code == 1
