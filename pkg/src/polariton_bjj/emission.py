"""Spectrally-resolved emission maps synthesized from stable states.

Each stable state n emits from both pillars with Gaussian spatial and
spectral amplitude profiles,

    Psi_jn(x, W) = sqrt(N_cjn) e^{i phi_jn} G(x - x_j; sigma_x) G(W - W_n; sigma_W),

where G(u; s) = (2 pi s^2)^(-1/4) exp(-u^2 / (4 s^2)) so that |G|^2 is a
unit-normalized density.  The two pillars of one state add coherently
(interference retained: bonding/antibonding patterns survive), different
states add in intensity since interactions among coexisting states are
neglected.  Each state then contributes

    N_cTn + 2 sqrt(N_c1n N_c2n) cos(dphi_n) exp(-(x1-x2)^2 / (8 sigma_x^2))

to the integrated map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import GridTooSmall
from .model import ModelParams
from .stability import classify
from .stationary import NON_CONDENSED, StationaryState, all_states_at_pumping

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class EmissionMap:
    """Intensity on a (position, energy) grid; intensity[ix, iw] >= 0."""

    x_grid: np.ndarray
    omega_grid: np.ndarray
    intensity: np.ndarray

    def integrated(self) -> float:
        """Trapezoidal integral of the intensity over (x, omega)."""
        return float(
            _trapezoid(_trapezoid(self.intensity, self.omega_grid, axis=1), self.x_grid)
        )


def _amplitude_profile(u: np.ndarray, sigma: float) -> np.ndarray:
    return (2.0 * math.pi * sigma**2) ** -0.25 * np.exp(-(u**2) / (4.0 * sigma**2))


def line_weight(st: StationaryState, x1: float, x2: float, sigma_x: float) -> float:
    """Integrated emission of one state including pillar interference."""
    overlap = math.exp(-((x1 - x2) ** 2) / (8.0 * sigma_x**2))
    return st.n_ct + 2.0 * math.sqrt(st.n_c1 * st.n_c2) * math.cos(st.delta_phi) * overlap


def emission_map(
    states: list[StationaryState],
    x1: float = -5.0,
    x2: float = 5.0,
    radius: float = 5.0,
    sigma_x: float | None = None,
    sigma_omega: float = 0.02,
    x_grid: np.ndarray | None = None,
    omega_grid: np.ndarray | None = None,
) -> EmissionMap:
    """Coherent per-state, incoherent across-states emission intensity.

    Positions in micrometers, energies in meV.  sigma_x defaults to half
    the pillar radius.  Raises GridTooSmall when the energy grid clips any
    state's line core (W_n +- 3 sigma_W must be covered).
    """
    if not states:
        raise ValueError("states must be non-empty")
    if sigma_x is None:
        sigma_x = 0.5 * radius
    if x_grid is None:
        x_grid = np.arange(-12.0, 12.0 + 1e-9, 0.1)
    x_grid = np.asarray(x_grid, dtype=float)
    omegas = [st.omega for st in states]
    if omega_grid is None:
        lo = min(omegas) - 5.0 * sigma_omega
        hi = max(omegas) + 5.0 * sigma_omega
        omega_grid = np.linspace(lo, hi, 601)
    omega_grid = np.asarray(omega_grid, dtype=float)
    for st in states:
        if st.omega - 3.0 * sigma_omega < omega_grid[0] or st.omega + 3.0 * sigma_omega > omega_grid[-1]:
            raise GridTooSmall(
                f"energy grid [{omega_grid[0]}, {omega_grid[-1]}] clips the line at {st.omega}"
            )
    intensity = np.zeros((x_grid.size, omega_grid.size))
    g1 = _amplitude_profile(x_grid - x1, sigma_x)
    g2 = _amplitude_profile(x_grid - x2, sigma_x)
    for st in states:
        spatial = np.abs(
            math.sqrt(max(st.n_c1, 0.0)) * g1
            + math.sqrt(max(st.n_c2, 0.0)) * np.exp(1j * st.delta_phi) * g2
        ) ** 2
        spectral = _amplitude_profile(omega_grid - st.omega, sigma_omega) ** 2
        intensity += np.outer(spatial, spectral)
    return EmissionMap(x_grid=x_grid, omega_grid=omega_grid, intensity=intensity)


def stable_states_for_emission(params: ModelParams, p1: float) -> list[StationaryState]:
    """Stable condensed states at the given pumping (the emitters).

    The non-condensed solution emits no condensate light and is excluded.
    """
    out = []
    for st in all_states_at_pumping(params, p1):
        if st.branch == NON_CONDENSED:
            continue
        verdict = classify(params, st)
        if verdict.stable:
            out.append(replace(st, stability=verdict))
    return out
