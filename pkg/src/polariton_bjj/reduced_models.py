"""Oscillator models of the two dynamical regimes of the junction.

Deep in the self-trapped regime (eta = sqrt(1 - zeta^2) << 1) the phase
difference obeys a pendulum equation with angle 2*dphi, a position-dependent
friction and a decaying drive:

    dphi'' = Umean*N_cT' - 2J ((1-eta)/eta) sin(dphi) dphi'
             - (2J^2/eta) sin(2*dphi),
    Umean*N_cT' = [2 Vmean^I + V12^I (1-eta)] Umean N_cT.

Its angular velocity dphi' = dE + 2J((1-eta)/eta) cos(dphi) with
dE = eps12 + V12^R + Umean (1-eta) N_cT can only vanish for dphi in
(pi/2, 3pi/2) when dE > 0, which is why the phase locks at pi for zero and
positive detuning and at zero only for large negative detuning.

In the opposite Josephson regime (|zeta| << 1, Umean*N_cT >> J) the flow
reduces to a junction driven by a d.c. current source V12^I; a fixed point
with sin(dphi) = V12^I/(2J) exists while the source stays below the
critical current 2J, and its loss marks the same boundary as the breakdown
of the gain-loss-balanced states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ChartSingularity
from .model import ModelParams, ReducedState

PI_LOCK = "pi_lock"
ZERO_LOCK = "zero_lock"

DC_REGIME = "dc_regime"
BROKEN = "broken"

# the eta << 1 expansion stops being trustworthy here
ETA_VALIDITY = 0.3
ZETA_VALIDITY = 0.2


@dataclass(frozen=True)
class PendulumState:
    """State of the self-trapping pendulum.

    eta is the depletion sqrt(1 - zeta^2) of the dominant site; n_r1 closes
    the model (the gain entering the friction and drive follows the
    reservoir).  ``in_regime`` flags where the small-eta expansion holds.
    """

    delta_phi: float
    delta_phi_dot: float
    eta: float
    n_ct: float
    n_r1: float = 0.0

    @property
    def in_regime(self) -> bool:
        return 0.0 < self.eta <= ETA_VALIDITY


class PendulumDerivative(NamedTuple):
    ddelta_phi: float
    ddelta_phi_dot: float
    deta: float
    dn_ct: float
    dn_r1: float


def pendulum_rhs(params: ModelParams, s: PendulumState) -> PendulumDerivative:
    """Right-hand side of the pendulum model (requires equal charging energies)."""
    if params.u1 != params.u2:
        raise ValueError("the pendulum model assumes u1 == u2")
    if s.eta <= 0.0:
        raise ChartSingularity(f"eta must be > 0, got {s.eta}")
    v1_i, v2_i = params.imag_potentials(s.n_r1)
    v12_i = v1_i - v2_i
    v_mean_i = 0.5 * (v1_i + v2_i)
    j = params.j_coupling
    u = params.u_mean
    dn_ct = (2.0 * v_mean_i + v12_i * (1.0 - s.eta)) * s.n_ct
    dphi_dot_dot = (
        u * dn_ct
        - 2.0 * j * ((1.0 - s.eta) / s.eta) * math.sin(s.delta_phi) * s.delta_phi_dot
        - (2.0 * j * j / s.eta) * math.sin(2.0 * s.delta_phi)
    )
    # depletion follows the imbalance equation on the site-1-trapped branch
    # zeta = +sqrt(1 - eta^2): eta' = -(zeta/eta) zeta'
    zeta = math.sqrt(max(1.0 - s.eta * s.eta, 0.0))
    deta = -zeta * (v12_i * s.eta - 2.0 * j * math.sin(s.delta_phi))
    dn_r1 = (
        params.pump_p1
        - params.gamma_r1 * s.n_r1
        - params.r1_prime * s.n_r1 * s.n_ct * 0.5 * (1.0 + zeta)
    )
    return PendulumDerivative(s.delta_phi_dot, dphi_dot_dot, deta, dn_ct, dn_r1)


def pendulum_angular_velocity(params: ModelParams, s: PendulumState) -> float:
    """Closed-form dphi' of the pendulum model at the given state."""
    de = (
        params.detuning(s.n_r1)
        + params.u_mean * (1.0 - s.eta) * s.n_ct
    )
    return de + 2.0 * params.j_coupling * ((1.0 - s.eta) / s.eta) * math.cos(s.delta_phi)


def locking_criterion(params: ModelParams, n_ct: float, n_r1: float = 0.0) -> str:
    """Predicted lock target of the phase difference in the trapped regime.

    pi_lock when the residual energy difference dE = eps12 + V12^R +
    Umean*N_cT (evaluated at vanishing depletion) is positive, zero_lock
    otherwise (large negative detuning).
    """
    de = params.detuning(n_r1) + params.u_mean * n_ct
    return PI_LOCK if de > 0.0 else ZERO_LOCK


class JosephsonDerivative(NamedTuple):
    dzeta: float
    ddelta_phi: float
    in_regime: bool


def josephson_rhs(params: ModelParams, s: ReducedState) -> JosephsonDerivative:
    """Linear-imbalance flow with N_cT and N_R1 frozen.

    ``in_regime`` is False when |zeta| > 0.2 and the small-imbalance
    expansion should not be trusted.
    """
    v1_i, v2_i = params.imag_potentials(s.n_r1)
    v12_i = v1_i - v2_i
    dzeta = v12_i - 2.0 * params.j_coupling * math.sin(s.delta_phi)
    ddphi = params.detuning(s.n_r1) + params.u_mean * s.n_ct * s.zeta
    return JosephsonDerivative(dzeta, ddphi, abs(s.zeta) <= ZETA_VALIDITY)


def critical_current_check(params: ModelParams, n_r1: float) -> str:
    """Whether the d.c. drive stays below the critical current 2J.

    At the gain-loss balance level the drive equals gamma2, so the
    boundary reproduces the breakdown condition of the balanced states
    (J = gamma2/2 is the exceptional point).
    """
    if n_r1 < 0:
        raise ValueError(f"n_r1 must be >= 0, got {n_r1}")
    v1_i, v2_i = params.imag_potentials(n_r1)
    v12_i = v1_i - v2_i
    return DC_REGIME if v12_i <= 2.0 * params.j_coupling else BROKEN
