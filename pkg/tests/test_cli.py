import json
import math
from pathlib import Path

import pytest
from click.testing import CliRunner

from polariton_bjj.cli import BUNDLED, EXPERIMENTS, main


def run_cli(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env, catch_exceptions=False)


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def read_csv(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def test_threshold_run_and_reproducibility(tmp_path):
    cfg = write_config(tmp_path, "thr.json", {
        "experiment": "threshold",
        "model": {},
        "j_grid": [0.0, 0.1],
        "output_dir": str(tmp_path / "out"),
    })
    res = run_cli("run", str(cfg))
    assert res.exit_code == 0, res.output
    header, rows = read_csv(tmp_path / "out" / "threshold.csv")
    assert header == ["J", "detuning", "N_Rth", "P_th"]
    p_ths = {float(r[0]): float(r[3]) for r in rows}
    assert p_ths[0.0] == pytest.approx(5.0, abs=1e-9)
    assert p_ths[0.1] == pytest.approx(10.0, abs=1e-9)
    first = (tmp_path / "out" / "threshold.csv").read_bytes()
    assert run_cli("run", str(cfg)).exit_code == 0
    assert (tmp_path / "out" / "threshold.csv").read_bytes() == first
    resolved = json.loads((tmp_path / "out" / "resolved_config.json").read_text())
    assert resolved["detunings"] == [0.0]
    assert resolved["model"]["gamma_r1"] == 0.5


def test_csv_values_round_trip(tmp_path):
    cfg = write_config(tmp_path, "thr.json", {
        "experiment": "threshold",
        "model": {},
        "j_grid": [0.03],
        "output_dir": str(tmp_path / "out"),
    })
    assert run_cli("run", str(cfg)).exit_code == 0
    _, rows = read_csv(tmp_path / "out" / "threshold.csv")
    from polariton_bjj import ModelParams, threshold_pumping
    from dataclasses import replace

    exact = threshold_pumping(replace(ModelParams(), j_coupling=0.03,
                                      detuning_override=0.0)).p_th
    assert float(rows[0][3]) == exact  # repr round-trips exactly


def test_malformed_config_fails_without_output(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    out = tmp_path / "out"
    res = run_cli("run", str(bad), env={"OUTPUT_DIR": str(out)})
    assert res.exit_code == 1
    err = json.loads(res.output.strip().splitlines()[-1])
    assert err["kind"] == "ConfigError"
    assert not out.exists()


def test_unknown_keys_rejected(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "experiment": "threshold", "model": {}, "j_grid": [0.0],
        "mystery": 1, "output_dir": str(tmp_path / "out"),
    })
    res = run_cli("run", str(cfg))
    assert res.exit_code == 1
    assert "mystery" in res.output
    cfg2 = write_config(tmp_path, "c2.json", {
        "experiment": "threshold", "model": {"gamma3": 1.0}, "j_grid": [0.0],
    })
    res = run_cli("run", str(cfg2))
    assert res.exit_code == 1
    assert "gamma3" in res.output


def test_stationary_requires_exactly_one_grid(tmp_path):
    cfg = write_config(tmp_path, "s.json", {
        "experiment": "stationary", "model": {},
        "p_grid": [11.0], "r1_grid": [0.15],
    })
    assert run_cli("run", str(cfg)).exit_code == 1
    cfg2 = write_config(tmp_path, "s2.json", {"experiment": "stationary", "model": {}})
    assert run_cli("run", str(cfg2)).exit_code == 1


def test_stationary_run(tmp_path):
    cfg = write_config(tmp_path, "s.json", {
        "experiment": "stationary", "model": {},
        "p_grid": [11.0], "classify": True,
        "output_dir": str(tmp_path / "out"),
    })
    assert run_cli("run", str(cfg)).exit_code == 0, "stationary run failed"
    header, rows = read_csv(tmp_path / "out" / "stationary.csv")
    assert header == ["P1", "branch", "Omega", "N_c1", "N_c2", "N_R1",
                      "zeta", "delta_phi", "max_growth", "stable"]
    branches = [r[1] for r in rows]
    assert branches == ["non_condensed", "pt_bonding", "pt_antibonding",
                        "self_trapped", "untrapped"]
    stable = {r[1]: r[9] for r in rows}
    assert stable["pt_bonding"] == "true" and stable["untrapped"] == "false"


def test_evolve_run_and_env_override(tmp_path):
    cfg = write_config(tmp_path, "e.json", {
        "experiment": "evolve",
        "model": {"pump_p1": 0.0, "j_coupling": 0.0},
        "init": {"zeta": 1.0, "n_ct": 1.0},
        "t_final": 10.0, "sample_dt": 1.0,
        "output_dir": str(tmp_path / "ignored"),
    })
    out = tmp_path / "envout"
    res = run_cli("run", str(cfg), env={"OUTPUT_DIR": str(out)})
    assert res.exit_code == 0
    assert not (tmp_path / "ignored").exists()
    header, rows = read_csv(out / "evolve.csv")
    assert header == ["t", "N_c1", "N_c2", "N_R1", "zeta", "delta_phi_unwrapped"]
    assert float(rows[-1][1]) == pytest.approx(math.exp(-1.0), rel=1e-8)


def test_reduced_run(tmp_path):
    cfg = write_config(tmp_path, "r.json", {
        "experiment": "reduced",
        "model": {"pump_p1": 11.0},
        "init": {"zeta": 0.0, "delta_phi": 0.5235987755982989, "n_ct": 10.0, "n_r1": 20.0},
        "t_final": 5.0, "sample_dt": 1.0,
        "output_dir": str(tmp_path / "out"),
    })
    assert run_cli("run", str(cfg)).exit_code == 0
    header, rows = read_csv(tmp_path / "out" / "reduced.csv")
    assert header == ["t", "zeta", "delta_phi_unwrapped", "N_cT", "N_R1"]
    # starting on the balanced fixed point, nothing moves
    assert float(rows[-1][3]) == pytest.approx(10.0, abs=1e-6)


def test_stability_run(tmp_path):
    cfg = write_config(tmp_path, "st.json", {
        "experiment": "stability", "model": {}, "p1": 11.0,
        "output_dir": str(tmp_path / "out"),
    })
    assert run_cli("run", str(cfg)).exit_code == 0
    header, rows = read_csv(tmp_path / "out" / "stability.csv")
    assert header[0] == "P1" and header[-1] == "stable"
    assert len(rows) == 5


def test_unwritable_output_dir_reports_io_error(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory", encoding="utf-8")
    cfg = write_config(tmp_path, "t.json", {
        "experiment": "threshold", "model": {}, "j_grid": [0.0],
        "output_dir": str(blocker / "out"),
    })
    res = run_cli("run", str(cfg))
    assert res.exit_code == 1
    err = json.loads(res.output.strip().splitlines()[-1])
    assert "Error" in err["kind"] or err["kind"] in ("NotADirectoryError", "FileExistsError")


def test_hysteresis_run(tmp_path):
    cfg = write_config(tmp_path, "h.json", {
        "experiment": "hysteresis", "model": {},
        "p_grid_up": [9.0], "p_grid_down": [9.0], "t_hold": 50.0,
        "output_dir": str(tmp_path / "out"),
    })
    assert run_cli("run", str(cfg)).exit_code == 0
    header, rows = read_csv(tmp_path / "out" / "hysteresis.csv")
    assert header == ["direction", "P1", "N_cT_avg", "zeta_avg", "converged"]
    assert [r[0] for r in rows] == ["up", "down"]


def test_basin_run(tmp_path):
    cfg = write_config(tmp_path, "b.json", {
        "experiment": "basin", "model": {},
        "p1": 11.0, "zeta_grid": [0.0], "phi_grid": [0.5235987755982989],
        "n_ct0": 10.0, "n_r10": 20.0, "t_max": 50.0,
        "output_dir": str(tmp_path / "out"),
    })
    assert run_cli("run", str(cfg)).exit_code == 0
    header, rows = read_csv(tmp_path / "out" / "basin.csv")
    assert header == ["zeta0", "phi0", "label"]
    assert rows[0][2] == "pt_bonding"


def test_bundled_configs_resolve(tmp_path):
    res = run_cli("run", "fig6a.json", env={"OUTPUT_DIR": str(tmp_path / "out")})
    assert res.exit_code == 0, res.output
    header, rows = read_csv(tmp_path / "out" / "emission.csv")
    assert header == ["x", "Omega", "intensity"]
    assert all(float(r[2]) >= 0.0 for r in rows)


def test_missing_config_reports_error():
    res = run_cli("run", "no_such_file.json")
    assert res.exit_code == 1
    assert "not found" in res.output


def test_list_experiments():
    res = run_cli("list-experiments")
    assert res.exit_code == 0
    for name in EXPERIMENTS:
        assert name in res.output
    for name in BUNDLED:
        assert name in res.output


def test_verify_subset():
    res = run_cli("verify", "--only", "1,2,3")
    assert res.exit_code == 0, res.output
    assert res.output.count("PASS") == 3
    res = run_cli("verify", "--only", "99")
    assert res.exit_code == 1
    res = run_cli("verify", "--only", "x")
    assert res.exit_code == 1
