"""Reduced equations of motion and linear stability of stationary states.

Only the phase difference across the junction is physically meaningful, so
stability is analyzed in the four reduced variables (zeta, delta_phi, N_cT,
N_R1) rather than by linearizing the complex amplitudes directly; the
global-phase zero mode is excluded by construction.  The reduced flow is

    zeta'      = V12^I (1 - zeta^2) - 2J sqrt(1 - zeta^2) sin(dphi)
    dphi'      = eps12 + V12^R + (U12/2 + Umean*zeta) N_cT
                 + 2J zeta/sqrt(1 - zeta^2) cos(dphi)
    N_cT'      = [2 Vmean^I + V12^I zeta] N_cT
    N_R1'      = P1 - gamma_R1 N_R1 - R1' N_R1 N_cT (1 + zeta)/2

with V1^I = (R1' N_R1 - gamma1)/2, V2^I = -gamma2/2, Umean = (U1+U2)/2,
U12 = U1 - U2.  Deviations around a fixed point grow like exp(lambda t);
the state is stable when max Re(lambda) stays at or below a small tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import ChartSingularity, NotAFixedPoint
from .model import ModelParams, ReducedState, reduced_from_full
from .spectrum import non_condensed_spectrum
from .stationary import (
    NON_CONDENSED,
    RESIDUAL_TOL,
    StationaryState,
    fixed_point_residual,
    full_state_of,
)

# growth rates within this band of zero count as marginal, not stable
STABILITY_TOL = 1e-9

_CHART_EDGE = 1.0 - 1e-12


class ReducedDerivative(NamedTuple):
    dzeta: float
    ddelta_phi: float
    dn_ct: float
    dn_r1: float


@dataclass(frozen=True)
class StabilityVerdict:
    """Eigenvalues of the reduced 4x4 Jacobian at a fixed point.

    ``stable`` means max Re(lambda) <= STABILITY_TOL; ``marginal`` flags
    growth rates indistinguishable from zero at that tolerance.
    ``low_confidence`` is inherited from the finite-difference Jacobian
    check and does not affect the verdict.
    """

    eigenvalues: tuple[complex, ...]
    max_growth: float
    stable: bool
    low_confidence: bool = False

    @property
    def marginal(self) -> bool:
        return abs(self.max_growth) <= STABILITY_TOL


def reduced_rhs(params: ModelParams, s: ReducedState) -> ReducedDerivative:
    """Time derivative of the reduced variables (real tunneling only)."""
    if params.radiative_gamma != 0.0:
        raise ValueError("reduced equations assume radiative_gamma = 0")
    if abs(s.zeta) >= _CHART_EDGE:
        raise ChartSingularity(f"|zeta| = {abs(s.zeta)} too close to 1")
    v1_i, v2_i = params.imag_potentials(s.n_r1)
    v12_i = v1_i - v2_i
    v_mean_i = 0.5 * (v1_i + v2_i)
    j = params.j_coupling
    root = math.sqrt(1.0 - s.zeta**2)
    sin_p, cos_p = math.sin(s.delta_phi), math.cos(s.delta_phi)
    dzeta = v12_i * (1.0 - s.zeta**2) - 2.0 * j * root * sin_p
    ddphi = (
        params.detuning(s.n_r1)
        + (0.5 * params.u_diff + params.u_mean * s.zeta) * s.n_ct
        + 2.0 * j * (s.zeta / root) * cos_p
    )
    dn_ct = (2.0 * v_mean_i + v12_i * s.zeta) * s.n_ct
    dn_r1 = (
        params.pump_p1
        - params.gamma_r1 * s.n_r1
        - params.r1_prime * s.n_r1 * s.n_ct * 0.5 * (1.0 + s.zeta)
    )
    return ReducedDerivative(dzeta, ddphi, dn_ct, dn_r1)


def _rhs_vec(params: ModelParams, x: np.ndarray) -> np.ndarray:
    s = ReducedState(zeta=x[0], delta_phi=x[1], n_ct=x[2], n_r1=x[3])
    return np.array(reduced_rhs(params, s), dtype=float)


def _central_jacobian(params: ModelParams, x: np.ndarray, scale: float) -> np.ndarray:
    jac = np.empty((4, 4))
    for k in range(4):
        h = scale * max(1e-7, 1e-7 * abs(x[k]))
        xp, xm = x.copy(), x.copy()
        xp[k] += h
        xm[k] -= h
        jac[:, k] = (_rhs_vec(params, xp) - _rhs_vec(params, xm)) / (2.0 * h)
    return jac


def jacobian(params: ModelParams, s: ReducedState) -> tuple[np.ndarray, bool]:
    """Central finite-difference Jacobian of the reduced flow.

    Step h = max(1e-7, 1e-7 |x|) per variable.  A half-step estimate must
    agree to 1e-5 in relative matrix norm; otherwise the second element of
    the returned pair flags low confidence (non-fatal).
    """
    if abs(s.zeta) >= _CHART_EDGE:
        raise ChartSingularity(f"|zeta| = {abs(s.zeta)} too close to 1")
    x = np.array([s.zeta, s.delta_phi, s.n_ct, s.n_r1], dtype=float)
    jac = _central_jacobian(params, x, 1.0)
    jac_half = _central_jacobian(params, x, 0.5)
    denom = max(float(np.max(np.abs(jac_half))), 1e-30)
    low_confidence = float(np.max(np.abs(jac - jac_half))) / denom > 1e-5
    return jac, low_confidence


def classify(params: ModelParams, st: StationaryState) -> StabilityVerdict:
    """Stability verdict for a stationary state.

    Condensed states use the eigenvalues of the reduced Jacobian.  The
    non-condensed state lives at the chart singularity N_cT = 0, so its
    verdict comes from the empty-junction fluctuation spectrum instead
    (growth rates lambda = -i omega, i.e. Re lambda = Im omega).
    Raises NotAFixedPoint when the residual exceeds 1e-6.
    """
    residual = fixed_point_residual(params, st)
    if residual > 1e-6:
        raise NotAFixedPoint(f"residual {residual} at state {st.branch}")
    p = replace(params, pump_p1=st.p1)
    if st.branch == NON_CONDENSED or st.n_ct == 0.0:
        spec = non_condensed_spectrum(p, st.n_r1)
        lams = (
            -1j * spec.omega_plus,
            (-1j * spec.omega_plus).conjugate(),
            -1j * spec.omega_minus,
            (-1j * spec.omega_minus).conjugate(),
        )
        max_growth = max(l.real for l in lams)
    else:
        s = reduced_from_full(full_state_of(st))
        jac, low = jacobian(p, s)
        eig = np.linalg.eigvals(jac)
        order = np.lexsort((eig.imag, eig.real))[::-1]
        lams = tuple(complex(e) for e in eig[order])
        max_growth = float(np.max(eig.real))
        return StabilityVerdict(
            eigenvalues=lams,
            max_growth=max_growth,
            stable=max_growth <= STABILITY_TOL,
            low_confidence=low,
        )
    return StabilityVerdict(
        eigenvalues=lams,
        max_growth=max_growth,
        stable=max_growth <= STABILITY_TOL,
    )


def classify_all(
    params: ModelParams, states: list[StationaryState]
) -> list[StationaryState]:
    """Attach verdicts to a catalogue of states."""
    return [replace(st, stability=classify(params, st)) for st in states]
