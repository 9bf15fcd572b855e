"""Command-line front end: JSON-configured experiments writing CSV datasets.

Every experiment is deterministic (fixed seeds, fixed grids), results are
computed fully before anything is written (no partial CSVs on failure), and
a resolved copy of the configuration is stored next to the outputs.  Values
are written with repr round-tripping, so re-running a config reproduces
byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

import click
import numpy as np

from . import acceptance
from .errors import ConfigError, SimulationError
from .model import FullState, ModelParams, ReducedState, full_from_reduced
from .spectrum import threshold_pumping
from .stability import classify
from .stationary import (
    BRANCH_MINUS,
    BRANCH_PLUS,
    all_states_at_pumping,
    branches_vs_r1,
)
from .dynamics import basin_map, evolve, evolve_reduced, hysteresis_sweep

EXPERIMENTS = (
    "threshold",
    "stationary",
    "stability",
    "evolve",
    "hysteresis",
    "basin",
    "emission",
    "reduced",
)

BUNDLED = ("fig2.json", "fig3.json", "fig4a.json", "fig4b.json",
           "fig5.json", "fig6a.json", "fig6b.json")

_MODEL_KEYS = {f.name for f in dataclasses.fields(ModelParams)}

# marks a config key with no default
REQUIRED = "__required__"

_EXPERIMENT_KEYS: dict[str, dict] = {
    "threshold": {"j_grid": REQUIRED, "detunings": [0.0]},
    "stationary": {
        "p_grid": None, "r1_grid": None, "detunings": None, "classify": True,
        "scan_points": 2000, "n_c1_max": 1000.0,
    },
    "stability": {"p1": REQUIRED, "scan_points": 2000},
    "evolve": {
        "init": REQUIRED, "t_final": REQUIRED, "dt_max": 0.5, "noise_sigma": 0.0,
        "seed": 0, "sample_dt": None,
    },
    "hysteresis": {
        "p_grid_up": REQUIRED, "p_grid_down": REQUIRED, "t_hold": REQUIRED,
        "seed_n_ct": 1e-6, "down_init": None,
    },
    "basin": {
        "p1": REQUIRED, "zeta_grid": REQUIRED, "phi_grid": REQUIRED,
        "n_ct0": REQUIRED, "n_r10": REQUIRED, "t_max": REQUIRED,
    },
    "emission": {
        "p1": REQUIRED, "x1": -5.0, "x2": 5.0, "radius": 5.0, "sigma_x": None,
        "sigma_omega": 0.02, "x_min": -12.0, "x_max": 12.0, "x_step": 0.1,
        "omega_pad": 0.1, "omega_step": 0.002,
    },
    "reduced": {"init": REQUIRED, "t_final": REQUIRED, "dt_max": 0.5, "sample_dt": None},
}

_INIT_KEYS = {"zeta": 0.0, "delta_phi": 0.0, "n_ct": 0.0, "n_r1": 0.0}


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _grid(value, where: str) -> list[float]:
    """A grid is either a list of numbers or {"linspace": [start, stop, num]}."""
    if isinstance(value, dict):
        if set(value) != {"linspace"}:
            raise ConfigError(f"{where}: grid object must have exactly the key 'linspace'")
        start, stop, num = value["linspace"]
        return [float(x) for x in np.linspace(float(start), float(stop), int(num))]
    if isinstance(value, list) and all(isinstance(x, (int, float)) for x in value):
        return [float(x) for x in value]
    raise ConfigError(f"{where}: expected a list of numbers or a linspace object")


def load_config(source: str) -> dict:
    """Read a config from a path or, failing that, from the bundled set."""
    path = Path(source)
    if path.exists():
        text = path.read_text(encoding="utf-8")
    elif str(path) == path.name and path.name in BUNDLED:
        text = resources.files("polariton_bjj").joinpath(
            "configs", path.name
        ).read_text(encoding="utf-8")
    else:
        raise ConfigError(f"config file not found: {source}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {source}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def resolve_config(raw: dict) -> dict:
    """Validate and fill defaults; unknown keys anywhere are rejected."""
    allowed_top = {"model", "experiment", "output_dir"}
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"experiment must be one of {', '.join(EXPERIMENTS)}, got {experiment!r}"
        )
    spec_keys = _EXPERIMENT_KEYS[experiment]
    unknown = set(raw) - allowed_top - set(spec_keys)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    model_raw = raw.get("model", {})
    if not isinstance(model_raw, dict):
        raise ConfigError("'model' must be an object")
    bad = set(model_raw) - _MODEL_KEYS
    if bad:
        raise ConfigError(f"unknown model keys: {sorted(bad)}")
    try:
        model = ModelParams(**model_raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from exc
    resolved = {
        "model": dataclasses.asdict(model),
        "experiment": experiment,
        "output_dir": raw.get("output_dir", "."),
    }
    for key, default in spec_keys.items():
        if key in raw:
            resolved[key] = raw[key]
        elif default is REQUIRED:
            raise ConfigError(f"experiment '{experiment}' requires key '{key}'")
        else:
            resolved[key] = default
    if "init" in resolved and resolved.get("init") is not None:
        init = resolved["init"]
        if not isinstance(init, dict) or set(init) - set(_INIT_KEYS):
            raise ConfigError(f"'init' must be an object with keys {sorted(_INIT_KEYS)}")
        resolved["init"] = {**_INIT_KEYS, **{k: float(v) for k, v in init.items()}}
    return resolved


def _state_rows(params: ModelParams, states, want_classify: bool):
    rows = []
    for st in states:
        if want_classify:
            verdict = classify(params, st)
            growth, stable = verdict.max_growth, verdict.stable
        else:
            growth, stable = math.nan, ""
        rows.append([st.p1, st.branch, st.omega, st.n_c1, st.n_c2, st.n_r1,
                     st.zeta, st.delta_phi, growth, stable])
    return rows


_STATE_HEADER = ["P1", "branch", "Omega", "N_c1", "N_c2", "N_R1",
                 "zeta", "delta_phi", "max_growth", "stable"]


def _run_threshold(model: ModelParams, cfg: dict):
    rows = []
    for det in _grid(cfg["detunings"], "detunings"):
        params = dataclasses.replace(model, detuning_override=det)
        for j in _grid(cfg["j_grid"], "j_grid"):
            res = threshold_pumping(dataclasses.replace(params, j_coupling=j))
            rows.append([j, det, res.n_r_th, res.p_th])
    return {"threshold.csv": (["J", "detuning", "N_Rth", "P_th"], rows)}


def _run_stationary(model: ModelParams, cfg: dict):
    if (cfg.get("p_grid") is None) == (cfg.get("r1_grid") is None):
        raise ConfigError("stationary needs exactly one of 'p_grid' or 'r1_grid'")
    want_classify = bool(cfg["classify"])
    if cfg.get("p_grid") is not None:
        rows = []
        for p1 in _grid(cfg["p_grid"], "p_grid"):
            states = all_states_at_pumping(model, p1, scan_points=int(cfg["scan_points"]))
            rows.extend(_state_rows(model, states, want_classify))
        return {"stationary.csv": (_STATE_HEADER, rows)}
    r1_grid = _grid(cfg["r1_grid"], "r1_grid")
    detunings = cfg.get("detunings")
    det_list = _grid(detunings, "detunings") if detunings is not None else [None]
    out = {}
    for i, det in enumerate(det_list):
        params = model if det is None else dataclasses.replace(model, detuning_override=det)
        states = []
        for branch in (BRANCH_PLUS, BRANCH_MINUS):
            states.extend(
                branches_vs_r1(params, branch, r1_grid,
                               n_c1_max=float(cfg["n_c1_max"]),
                               scan_points=int(cfg["scan_points"]))
            )
        name = "stationary.csv" if len(det_list) == 1 else f"stationary_{i}.csv"
        out[name] = (_STATE_HEADER, _state_rows(params, states, want_classify))
    return out


def _run_stability(model: ModelParams, cfg: dict):
    states = all_states_at_pumping(model, float(cfg["p1"]),
                                   scan_points=int(cfg["scan_points"]))
    return {"stability.csv": (_STATE_HEADER, _state_rows(model, states, True))}


def _traj_rows(traj):
    rows = []
    for i, t in enumerate(traj.times):
        rows.append([t, traj.n_c1[i], traj.n_c2[i], traj.n_r1[i],
                     traj.zeta[i], traj.delta_phi[i]])
    return rows


def _run_evolve(model: ModelParams, cfg: dict):
    init = full_from_reduced(ReducedState(**cfg["init"]))
    traj = evolve(
        model, init, float(cfg["t_final"]), dt_max=float(cfg["dt_max"]),
        noise_sigma=float(cfg["noise_sigma"]), seed=int(cfg["seed"]),
        sample_dt=None if cfg["sample_dt"] is None else float(cfg["sample_dt"]),
    )
    header = ["t", "N_c1", "N_c2", "N_R1", "zeta", "delta_phi_unwrapped"]
    return {"evolve.csv": (header, _traj_rows(traj))}


def _run_hysteresis(model: ModelParams, cfg: dict):
    down_init = cfg.get("down_init")
    if down_init is not None:
        down_init = full_from_reduced(
            ReducedState(**{**_INIT_KEYS, **{k: float(v) for k, v in down_init.items()}})
        )
    up, down = hysteresis_sweep(
        model,
        _grid(cfg["p_grid_up"], "p_grid_up"),
        _grid(cfg["p_grid_down"], "p_grid_down"),
        t_hold=float(cfg["t_hold"]),
        seed_n_ct=float(cfg["seed_n_ct"]),
        down_init=down_init,
    )
    rows = []
    for sweep in (up, down):
        for i, p in enumerate(sweep.p1):
            rows.append([sweep.direction, p, sweep.n_ct_avg[i],
                         sweep.zeta_avg[i], sweep.converged[i]])
    header = ["direction", "P1", "N_cT_avg", "zeta_avg", "converged"]
    return {"hysteresis.csv": (header, rows)}


def _run_basin(model: ModelParams, cfg: dict):
    bm = basin_map(
        model, float(cfg["p1"]),
        _grid(cfg["zeta_grid"], "zeta_grid"), _grid(cfg["phi_grid"], "phi_grid"),
        n_ct0=float(cfg["n_ct0"]), n_r10=float(cfg["n_r10"]),
        t_max=float(cfg["t_max"]),
    )
    rows = []
    for i, z in enumerate(bm.zeta_grid):
        for j, phi in enumerate(bm.phi_grid):
            rows.append([z, phi, bm.labels[i][j]])
    return {"basin.csv": (["zeta0", "phi0", "label"], rows)}


def _run_emission(model: ModelParams, cfg: dict):
    from .emission import emission_map, stable_states_for_emission

    states = stable_states_for_emission(model, float(cfg["p1"]))
    if not states:
        raise SimulationError(f"no stable condensed states at P1={cfg['p1']}")
    x_grid = np.arange(float(cfg["x_min"]), float(cfg["x_max"]) + 1e-12,
                       float(cfg["x_step"]))
    omegas = [st.omega for st in states]
    pad = float(cfg["omega_pad"])
    omega_grid = np.arange(min(omegas) - pad, max(omegas) + pad + 1e-12,
                           float(cfg["omega_step"]))
    sigma_x = cfg["sigma_x"]
    em = emission_map(
        states, x1=float(cfg["x1"]), x2=float(cfg["x2"]),
        radius=float(cfg["radius"]),
        sigma_x=None if sigma_x is None else float(sigma_x),
        sigma_omega=float(cfg["sigma_omega"]),
        x_grid=x_grid, omega_grid=omega_grid,
    )
    rows = []
    for ix, x in enumerate(em.x_grid):
        for iw, w in enumerate(em.omega_grid):
            rows.append([x, w, em.intensity[ix, iw]])
    return {"emission.csv": (["x", "Omega", "intensity"], rows)}


def _run_reduced(model: ModelParams, cfg: dict):
    times, ys = evolve_reduced(
        model, ReducedState(**cfg["init"]), float(cfg["t_final"]),
        dt_max=float(cfg["dt_max"]),
        sample_dt=None if cfg["sample_dt"] is None else float(cfg["sample_dt"]),
    )
    rows = [[t, ys[i, 0], ys[i, 1], ys[i, 2], ys[i, 3]] for i, t in enumerate(times)]
    header = ["t", "zeta", "delta_phi_unwrapped", "N_cT", "N_R1"]
    return {"reduced.csv": (header, rows)}


_RUNNERS = {
    "threshold": _run_threshold,
    "stationary": _run_stationary,
    "stability": _run_stability,
    "evolve": _run_evolve,
    "hysteresis": _run_hysteresis,
    "basin": _run_basin,
    "emission": _run_emission,
    "reduced": _run_reduced,
}


def run_config(resolved: dict, output_dir: Path) -> list[Path]:
    """Execute a resolved config; returns the written file paths."""
    model = ModelParams(**resolved["model"])
    outputs = _RUNNERS[resolved["experiment"]](model, resolved)
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (header, rows) in outputs.items():
        path = output_dir / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        written.append(path)
    resolved_path = output_dir / "resolved_config.json"
    resolved_path.write_text(
        json.dumps(resolved, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written.append(resolved_path)
    return written


def _fail(exc: Exception, experiment: str | None) -> None:
    line = json.dumps(
        {"error": str(exc), "kind": type(exc).__name__, "experiment": experiment}
    )
    click.echo(line, err=True)
    sys.exit(1)


@click.group()
def main():
    """Mean-field simulations of a one-side-pumped polariton Josephson junction."""


@main.command()
@click.argument("config")
def run(config):
    """Run the experiment described by CONFIG (a JSON file or a bundled name)."""
    experiment = None
    try:
        resolved = resolve_config(load_config(config))
        experiment = resolved["experiment"]
        out_dir = Path(os.environ.get("OUTPUT_DIR", resolved["output_dir"]))
        written = run_config(resolved, out_dir)
    except (SimulationError, OSError) as exc:
        _fail(exc, experiment)
        return
    for path in written:
        click.echo(f"wrote {path}")


@main.command()
@click.option("--only", default=None,
              help="Comma-separated criterion ids to run (default: all).")
def verify(only):
    """Run the acceptance suite; exit 0 only if every criterion passes."""
    ids = None
    if only:
        try:
            ids = sorted({int(x) for x in only.split(",")})
        except ValueError:
            _fail(ConfigError(f"--only expects comma-separated integers, got {only!r}"),
                  "verify")
            return
        unknown = [i for i in ids if i not in acceptance.CRITERIA]
        if unknown:
            _fail(ConfigError(f"unknown criterion ids: {unknown}"), "verify")
            return
    results = acceptance.run(ids)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        click.echo(f"{status} {res.cid:2d} {res.name}: {res.details}")
    failed = [r.cid for r in results if not r.passed]
    if failed:
        click.echo(f"{len(failed)} criteria failed: {failed}", err=True)
        sys.exit(1)


@main.command("list-experiments")
def list_experiments():
    """List experiment kinds and bundled configs."""
    click.echo("experiments:")
    for name in EXPERIMENTS:
        keys = _EXPERIMENT_KEYS[name]
        required = sorted(k for k, v in keys.items() if v is REQUIRED)
        click.echo(f"  {name}: required keys {required or '[]'}")
    click.echo("bundled configs:")
    for name in BUNDLED:
        click.echo(f"  {name}")


if __name__ == "__main__":
    main()
