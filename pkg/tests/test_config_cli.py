"""Run configuration round-trip and the command-line contract."""

import json
import math

import numpy as np
import pytest

from torus_scatter import cli
from torus_scatter.config import ConfigError, PGrid, RunConfig


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------


def test_pgrid_validation_and_build():
    grid = PGrid(0.1, 10.0, count=5, spacing="log")
    np.testing.assert_allclose(grid.build(), np.geomspace(0.1, 10.0, 5))
    assert PGrid(1.0, 2.0, count=3, spacing="linear").build().tolist() == [1.0, 1.5, 2.0]
    for bad in (
        dict(min=-1.0, max=2.0),
        dict(min=2.0, max=1.0),
        dict(min=1.0, max=2.0, count=1),
        dict(min=1.0, max=2.0, spacing="cubic"),
    ):
        with pytest.raises(ConfigError):
            PGrid(**bad)


def test_runconfig_roundtrip_identity():
    cfg = RunConfig(
        dimension=3,
        a0=-15.0,
        a1=-1.0,
        family={"table": "T2", "row": 5, "lambda": 0.01},
        p_grid=PGrid(0.01, 100.0, count=41, spacing="log"),
        c1=2.0,
        tolerances={"phase_map": 1e-9},
        seed=7,
    )
    assert RunConfig.from_json(cfg.to_json()) == cfg


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig(dimension=4, a0=1.0, a1=1.0)
    with pytest.raises(ConfigError):
        RunConfig(dimension=3, a0=1.0, a1=1.0, c1=0.0)
    with pytest.raises(ConfigError):
        RunConfig(dimension=3, a0=1.0, a1=1.0, family={"row": 4})
    with pytest.raises(ConfigError):
        RunConfig(dimension=3, a0=1.0, a1=1.0, tolerances={"nope": 1e-9})
    with pytest.raises(ConfigError):
        RunConfig(dimension=3, a0=1.0, a1=1.0, tolerances={"phase_map": -1e-9})
    with pytest.raises(ConfigError):
        RunConfig(dimension=3, a0=1.0, a1=1.0, seed=-1)
    with pytest.raises(ConfigError):
        RunConfig.from_json({"dimension": 3, "a0": 1.0})
    with pytest.raises(ConfigError):
        RunConfig.from_json({"dimension": 3, "a0": 1.0, "a1": 2.0, "extra": 1})


def test_build_model_matches_family():
    cfg = RunConfig(
        dimension=3, a0=1.0, a1=5.0, family={"table": "T1", "row": 4}
    )
    model = cfg.build_model()
    assert model.family.table == "T1" and model.family.row == 4
    assert model.singlet.r == 0.0
    cfg2d = RunConfig(dimension=2, a0=1.0, a1=3.0)
    assert cfg2d.build_model().dimension == 2
    with pytest.raises(ConfigError):
        RunConfig(dimension=2, a0=1.0, a1=3.0, family={"table": "T1", "row": 1}).build_model()
    # family sign violation surfaces as a config error
    with pytest.raises(ConfigError):
        RunConfig(
            dimension=3, a0=-1.0, a1=5.0, family={"table": "T1", "row": 4}
        ).build_model()


# ---------------------------------------------------------------------------
# CLI helpers
# ---------------------------------------------------------------------------


def _write_config(tmp_path, name="cfg.json", **overrides):
    data = {
        "dimension": 3,
        "a0": 1.0,
        "a1": 5.0,
        "family": {"table": "T1", "row": 4},
        "p_grid": {"min": 0.01, "max": 100.0, "count": 41, "spacing": "log"},
        "seed": 3,
    }
    data.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_traj_header_and_determinism(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert cli.main(["traj", "--config", cfg, "--out", str(out1)]) == 0
    assert cli.main(["traj", "--config", cfg, "--out", str(out2)]) == 0
    text1, text2 = out1.read_bytes(), out2.read_bytes()
    assert text1 == text2  # bit-identical
    lines = text1.decode().splitlines()
    assert lines[0] == "p,phi,theta,dphi_dp,dtheta_dp,kappa,V,quadrant"
    assert len(lines) == 42
    first = lines[1].split(",")
    assert float(first[0]) == pytest.approx(0.01)
    # 17-significant-digit round trip: re-parsing and re-formatting is stable
    for field in first[:7]:
        if field:
            assert f"{float(field):.17g}" == field
    assert first[7] in {
        "top-right", "top-left", "bottom-left", "bottom-right", "boundary",
    }


def test_traj_minimal_two_row_grid(tmp_path):
    cfg = _write_config(
        tmp_path, p_grid={"min": 1.0, "max": 1.1, "count": 2, "spacing": "linear"}
    )
    out = tmp_path / "mini.csv"
    assert cli.main(["traj", "--config", cfg, "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3  # header + 2 rows


def test_traj_phase_values_match_closed_form(tmp_path):
    cfg = _write_config(
        tmp_path, p_grid={"min": 1.0, "max": 2.0, "count": 2, "spacing": "linear"}
    )
    out = tmp_path / "check.csv"
    cli.main(["traj", "--config", cfg, "--out", str(out)])
    row = out.read_text().splitlines()[1].split(",")
    # phi = -2 arctan(a0 p), theta = -2 arctan(a1 p) at r = 0
    assert float(row[1]) == pytest.approx(-2.0 * math.atan(1.0), rel=1e-15)
    assert float(row[2]) == pytest.approx(-2.0 * math.atan(5.0), rel=1e-15)
    assert float(row[3]) == pytest.approx(-2.0 / (1.0 + 1.0), rel=1e-15)
    assert float(row[4]) == pytest.approx(-2.0 * 5.0 / (1.0 + 25.0), rel=1e-15)


def test_verify_report_structure_and_determinism(tmp_path):
    cfg = _write_config(tmp_path)
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert cli.main(["verify", "--config", cfg, "--suite", "symmetry", "--out", str(out1)]) == 0
    assert cli.main(["verify", "--config", cfg, "--suite", "symmetry", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["suite"] == "symmetry"
    assert report["pass"] is True
    names = {c["name"] for c in report["checks"]}
    assert names == {"phase_map", "density_map"}
    for check in report["checks"]:
        assert set(check) >= {"name", "max_deviation", "tolerance", "pass"}
        assert check["max_deviation"] < check["tolerance"]


def test_verify_all_skips_inapplicable(tmp_path):
    cfg = _write_config(tmp_path)
    out = tmp_path / "all.json"
    assert cli.main(["verify", "--config", cfg, "--suite", "all", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    skipped = {s["suite"] for s in report["skipped"]}
    assert "poles" in skipped  # zero-range family: no causal pole structure
    assert {"symmetry", "ep", "wigner", "eom"} <= {c for c in _suites_run(report)}


def _suites_run(report):
    mapping = {
        "phase_map": "symmetry",
        "density_map": "symmetry",
        "eom_residual": "eom",
        "overdetermination_2d": "eom",
        "tangent_audit": "wigner",
        "quadrant_exit_audit": "wigner",
        "pole_match_singlet": "poles",
        "pole_match_triplet": "poles",
        "pole_lower_half": "poles",
        "ep_invariance": "ep",
    }
    return {mapping[c["name"]] for c in report["checks"]}


def test_exit_code_matrix(tmp_path, capsys):
    # 0: passing verification
    cfg_pass = _write_config(tmp_path, name="pass.json")
    assert cli.main(["verify", "--config", cfg_pass, "--suite", "symmetry"]) == 0
    capsys.readouterr()

    # 1: failing verification (positive-range family violates the bounds)
    cfg_fail = _write_config(
        tmp_path,
        name="fail.json",
        a0=1.0,
        a1=5.0,
        family={"table": "T2", "row": 6, "lambda": 0.1},
        p_grid={"min": 0.01, "max": 100.0, "count": 400, "spacing": "log"},
    )
    assert cli.main(["verify", "--config", cfg_fail, "--suite", "wigner"]) == 1
    out = capsys.readouterr()
    report = json.loads(out.out)
    assert report["pass"] is False

    # 2: config errors -> JSON diagnostic on stderr
    missing = tmp_path / "missing.json"
    assert cli.main(["verify", "--config", str(missing), "--suite", "symmetry"]) == 2
    err = capsys.readouterr().err
    assert json.loads(err.strip())["error"]

    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    assert cli.main(["traj", "--config", str(bad_json)]) == 2
    assert json.loads(capsys.readouterr().err.strip())["error"]

    cfg_nofam = _write_config(tmp_path, name="nofam.json", family=None)
    assert cli.main(["verify", "--config", cfg_nofam, "--suite", "eom"]) == 2
    capsys.readouterr()

    # 2: poles with invalid lambda
    assert cli.main(["poles", "--a", "-1", "--lam", "-1"]) == 2
    capsys.readouterr()

    # 2: unknown tolerance key in config
    cfg_badtol = _write_config(tmp_path, name="badtol.json", tolerances={"zzz": 1e-9})
    assert cli.main(["verify", "--config", cfg_badtol, "--suite", "symmetry"]) == 2
    capsys.readouterr()


def test_poles_cli_json(tmp_path, capsys):
    assert cli.main(["poles", "--a", "-1", "--lam", "0.25"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["case"] == "double_virtual"
    assert report["poles"] == [{"im": -2.0, "mult": 2, "re": 0.0}]
    assert report["lower_half"] is True

    assert cli.main(["poles", "--a", "-1", "--lam", "0.5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["case"] == "resonance_pair"
    res = sorted((p["re"], p["im"]) for p in report["poles"])
    assert res == [(-1.0, -1.0), (1.0, -1.0)]

    # r-mode reports the zero-range scope flag
    assert cli.main(["poles", "--a", "2.0", "--r", "0.0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["case"] == "single_pole"
    assert report["scope"] == "outside causal-model scope"
    assert report["lower_half"] is False


def test_ep_command(tmp_path):
    cfg = _write_config(
        tmp_path, p_grid={"min": 0.5, "max": 2.0, "count": 4, "spacing": "log"}
    )
    out = tmp_path / "ep.csv"
    assert cli.main(["ep", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "p,phi,theta,ep"
    assert len(lines) == 5
    for line in lines[1:]:
        p, phi, theta, ep_val = (float(v) for v in line.split(","))
        assert ep_val == pytest.approx(math.sin(theta - phi) ** 2 / 6.0, rel=1e-12)


def test_verify_poles_suite_on_causal_family(tmp_path):
    cfg = _write_config(
        tmp_path,
        name="causal.json",
        a0=-1.0,
        a1=-5.0,
        family={"table": "T3", "row": 6, "lambda": 0.25},
        p_grid={"min": 0.01, "max": 100.0, "count": 200, "spacing": "log"},
    )
    assert cli.main(["verify", "--config", cfg, "--suite", "poles", "--out", "/dev/null"]) == 0


def test_verify_tol_override_can_force_failure(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    # machine-precision results cannot beat an absurd 1e-20 tolerance
    assert cli.main(["verify", "--config", cfg, "--suite", "symmetry", "--tol", "1e-20"]) == 1
    capsys.readouterr()
