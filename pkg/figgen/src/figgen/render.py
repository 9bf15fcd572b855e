"""Deterministic figure rendering from the simulation CSV schemas.

Each figure kind expects the column set written by the corresponding
experiment and fails loudly (SchemaMismatch) when columns are missing or
the file carries no rows.  Styles are fixed and no timestamps are embedded,
so rendering a CSV twice produces byte-identical images.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

matplotlib.rcParams.update({
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.markersize": 3.5,
})

# one PNG text chunk, fixed, instead of the version-carrying default
_METADATA = {"Software": "figgen"}

FIGURE_KINDS = ("threshold", "branches", "traces", "basin", "emission")

BRANCH_COLORS = {
    "self_trapped": "tab:blue",
    "untrapped": "tab:red",
    "pt_antibonding": "tab:orange",
    "pt_bonding": "tab:green",
    "non_condensed": "black",
    "plus": "tab:blue",
    "minus": "tab:red",
}
_FALLBACK_COLORS = ("tab:purple", "tab:brown", "tab:pink", "tab:gray", "tab:olive")


class SchemaMismatch(Exception):
    """The CSV does not carry the columns the figure kind needs."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    figure_kind: str
    output_path: str


def _read_csv(path: str) -> dict[str, list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path}: empty file (no header row)") from None
        rows = list(reader)
    if not rows:
        raise SchemaMismatch(f"{path}: no data rows")
    return {name: [row[i] for row in rows] for i, name in enumerate(header)}


def _require(data: dict, path: str, *names: str) -> list:
    missing = [n for n in names if n not in data]
    if missing:
        raise SchemaMismatch(f"{path}: missing columns {missing}")
    return [data[n] for n in names]


def _floats(column: list[str]) -> np.ndarray:
    return np.array([float(v) for v in column])


def _color_for(label: str, seen: dict) -> str:
    if label in BRANCH_COLORS:
        return BRANCH_COLORS[label]
    if label not in seen:
        seen[label] = _FALLBACK_COLORS[len(seen) % len(_FALLBACK_COLORS)]
    return seen[label]


def _render_threshold(data, path, out):
    j, det, p_th = _require(data, path, "J", "detuning", "P_th")
    j, p_th = _floats(j), _floats(p_th)
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    for i, d in enumerate(sorted(set(det))):
        mask = np.array([x == d for x in det])
        order = np.argsort(j[mask])
        ax.plot(j[mask][order], p_th[mask][order], marker="o",
                label=f"detuning = {d} meV")
    ax.set_xlabel("tunneling J (meV)")
    ax.set_ylabel("threshold pumping")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(out, metadata=_METADATA)
    plt.close(fig)


def _render_branches(data, path, out):
    cols = _require(data, path, "P1", "branch", "Omega", "N_c1", "N_c2",
                    "N_R1", "zeta", "delta_phi", "max_growth", "stable")
    p1, branch = _floats(cols[0]), cols[1]
    omega, n_c1, n_c2 = _floats(cols[2]), _floats(cols[3]), _floats(cols[4])
    n_r1, zeta, dphi = _floats(cols[5]), _floats(cols[6]), _floats(cols[7])
    growth = _floats(cols[8])
    stable = np.array([s == "true" for s in cols[9]])
    panels = [
        ("energy (meV)", omega),
        ("reservoir number", n_r1),
        ("total condensate number", n_c1 + n_c2),
        ("imbalance", zeta),
        ("max growth rate", growth),
        ("phase difference (rad)", dphi),
    ]
    fig, axes = plt.subplots(2, 3, figsize=(10.0, 5.6), sharex=True)
    seen = {}
    for ax, (label, values) in zip(axes.flat, panels):
        for b in sorted(set(branch)):
            mask = np.array([x == b for x in branch])
            color = _color_for(b, seen)
            # stability by marker fill: stable filled, unstable hollow
            for flag, fill in ((True, color), (False, "none")):
                sel = mask & (stable == flag)
                if sel.any():
                    ax.scatter(p1[sel], values[sel], s=14, facecolors=fill,
                               edgecolors=color, linewidths=0.8,
                               label=b if (flag and label == "energy (meV)") else None)
        ax.set_ylabel(label)
    for ax in axes[1]:
        ax.set_xlabel("pumping P1")
    axes[0, 0].legend(loc="best", fontsize=7)
    fig.tight_layout()
    fig.savefig(out, metadata=_METADATA)
    plt.close(fig)


def _render_traces(data, path, out):
    cols = _require(data, path, "t", "N_c1", "N_c2", "zeta", "delta_phi_unwrapped")
    t, n_c1, n_c2 = _floats(cols[0]), _floats(cols[1]), _floats(cols[2])
    zeta, dphi = _floats(cols[3]), _floats(cols[4])
    fig, axes = plt.subplots(3, 1, figsize=(5.2, 6.4), sharex=True)
    axes[0].plot(t, n_c1 + n_c2, color="tab:blue")
    axes[0].set_ylabel("total condensate number")
    axes[1].plot(t, zeta, color="tab:red")
    axes[1].set_ylabel("imbalance")
    axes[2].plot(t, dphi, color="tab:green")
    axes[2].set_ylabel("phase difference (rad)")
    axes[2].set_xlabel("time (hbar/meV)")
    # final-phase inset: the locked value modulo 2 pi over the last tenth
    tail = slice(int(0.9 * len(t)), None)
    inset = axes[2].inset_axes([0.55, 0.12, 0.4, 0.35])
    inset.plot(t[tail], np.mod(dphi[tail], 2.0 * math.pi), color="tab:green")
    inset.axhline(math.pi, color="gray", lw=0.6, ls="--")
    inset.set_ylim(0.0, 2.0 * math.pi)
    inset.tick_params(labelsize=6)
    inset.set_title("final phase mod 2pi", fontsize=6)
    fig.tight_layout()
    fig.savefig(out, metadata=_METADATA)
    plt.close(fig)


def _render_basin(data, path, out):
    zeta0, phi0, label = _require(data, path, "zeta0", "phi0", "label")
    zeta0, phi0 = _floats(zeta0), _floats(phi0)
    zs = np.unique(zeta0)
    ps = np.unique(phi0)
    labels = sorted(set(label))
    seen = {}
    colors = [_color_for(l, seen) for l in labels]
    index = {l: i for i, l in enumerate(labels)}
    grid = np.full((zs.size, ps.size), np.nan)
    for z, p, l in zip(zeta0, phi0, label):
        grid[np.searchsorted(zs, z), np.searchsorted(ps, p)] = index[l]
    fig, ax = plt.subplots(figsize=(4.8, 3.6))
    cmap = matplotlib.colors.ListedColormap(colors)
    ax.pcolormesh(ps, zs, grid, cmap=cmap, vmin=-0.5, vmax=len(labels) - 0.5,
                  shading="nearest")
    ax.set_xlabel("initial phase difference (rad)")
    ax.set_ylabel("initial imbalance")
    handles = [plt.Line2D([], [], marker="s", ls="", color=c, label=l)
               for l, c in zip(labels, colors)]
    ax.legend(handles=handles, loc="upper left", fontsize=7)
    fig.tight_layout()
    fig.savefig(out, metadata=_METADATA)
    plt.close(fig)


def _render_emission(data, path, out):
    x, omega, intensity = (_floats(c) for c in
                           _require(data, path, "x", "Omega", "intensity"))
    xs = np.unique(x)
    ws = np.unique(omega)
    grid = np.full((ws.size, xs.size), np.nan)
    ix = np.searchsorted(xs, x)
    iw = np.searchsorted(ws, omega)
    grid[iw, ix] = intensity
    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    mesh = ax.pcolormesh(xs, ws, grid, cmap="magma", shading="nearest")
    fig.colorbar(mesh, ax=ax, label="intensity")
    ax.set_xlabel("position (um)")
    ax.set_ylabel("energy (meV)")
    fig.tight_layout()
    fig.savefig(out, metadata=_METADATA)
    plt.close(fig)


_RENDERERS = {
    "threshold": _render_threshold,
    "branches": _render_branches,
    "traces": _render_traces,
    "basin": _render_basin,
    "emission": _render_emission,
}


def render(spec: FigureSpec) -> Path:
    """Render one CSV to one image; returns the written path."""
    if spec.figure_kind not in _RENDERERS:
        raise ValueError(
            f"figure_kind must be one of {FIGURE_KINDS}, got {spec.figure_kind!r}"
        )
    data = _read_csv(spec.csv_path)
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    _RENDERERS[spec.figure_kind](data, spec.csv_path, out)
    return out
