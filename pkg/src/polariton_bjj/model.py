"""Core two-mode model of a polariton Josephson junction pumped on one side.

Two micropillar condensates with amplitudes Psi_1, Psi_2 are coupled by a
tunneling J and fed by an incoherent reservoir N_R1 on site 1 only.  The
condensates obey a generalized Gross-Pitaevskii equation

    i dPsi/dt = H Psi,   H = [[E1, -(J + i*Gamma)], [-(J + i*Gamma), E2]],

with complex on-site energies E_j = eps_j + V_j^R + U_j |Psi_j|^2 + i V_j^I.
The imaginary potentials carry gain on the pumped site and loss on both:
V_1^I = (R1' N_R1 - gamma1)/2 and V_2^I = -gamma2/2.  The reservoir follows

    dN_R1/dt = P1 - gamma_R1 N_R1 - R1' N_R1 |Psi_1|^2.

Units: hbar = 1, all energies and rates in meV, time in hbar/meV
(HBAR_MEV_PS picoseconds).  Pumping P1 is in particles * meV.

Everything here is an immutable value or a pure function, safe to call from
any number of workers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import ZeroCondensate

# One time unit (hbar/meV) expressed in picoseconds, for reporting only.
HBAR_MEV_PS = 0.6582119569


@dataclass(frozen=True)
class ModelParams:
    """All physical constants of the junction.

    Defaults are the baseline micropillar parameter set used throughout:
    eps1 = eps2 = 0, U = 0.01 meV, gamma = 0.1 meV, gamma_R1 = 0.5 meV,
    R1' = 0.01 meV, J = 0.1 meV.

    ``detuning_override``, when set, fixes the effective detuning
    eps12 + V12^R to a constant and replaces the g_tilde / g_exciton1
    contributions (the default mode for all quantitative results).  When
    unset, V_j^R is computed self-consistently as
    (g_tilde/area_j) N_Rj + g_exciton_j P_j.

    Site 2 carries no reservoir and no pump (one-side pumping geometry).
    """

    eps1: float = 0.0
    eps2: float = 0.0
    u1: float = 0.01
    u2: float = 0.01
    j_coupling: float = 0.1
    gamma1: float = 0.1
    gamma2: float = 0.1
    gamma_r1: float = 0.5
    r1_prime: float = 0.01
    g_tilde: float = 0.0
    area_1: float = 1.0
    g_exciton1: float = 0.0
    radiative_gamma: float = 0.0
    detuning_override: float | None = None
    pump_p1: float = 0.0

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "gamma_r1", "r1_prime", "j_coupling"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.pump_p1 < 0:
            raise ValueError(f"pump_p1 must be >= 0, got {self.pump_p1}")
        if self.area_1 <= 0:
            raise ValueError(f"area_1 must be > 0, got {self.area_1}")

    @property
    def tunneling(self) -> complex:
        """Complex tunneling J + i*Gamma (Gamma = 0 unless radiative coupling is on)."""
        return complex(self.j_coupling, self.radiative_gamma)

    @property
    def u_mean(self) -> float:
        return 0.5 * (self.u1 + self.u2)

    @property
    def u_diff(self) -> float:
        return self.u1 - self.u2

    @property
    def pt_reservoir_level(self) -> float:
        """Reservoir number where site-1 net gain equals site-2 loss: R1(N) - gamma1 = gamma2."""
        return (self.gamma1 + self.gamma2) / self.r1_prime

    def with_pumping(self, p1: float) -> "ModelParams":
        return replace(self, pump_p1=p1)

    def detuning(self, n_r1: float) -> float:
        """Effective detuning eps12 + V12^R at reservoir number n_r1."""
        if self.detuning_override is not None:
            return self.detuning_override
        v1_r = (self.g_tilde / self.area_1) * n_r1 + self.g_exciton1 * self.pump_p1
        return (self.eps1 - self.eps2) + v1_r

    def imag_potentials(self, n_r1: float) -> tuple[float, float]:
        """(V_1^I, V_2^I): half net gain on site 1, half loss on site 2."""
        return 0.5 * (self.r1_prime * n_r1 - self.gamma1), -0.5 * self.gamma2


@dataclass(frozen=True)
class FullState:
    """Instantaneous condensate amplitudes and reservoir number."""

    psi1: complex
    psi2: complex
    n_r1: float

    def __post_init__(self):
        # tolerate integrator-level roundoff below zero, reject real negatives
        if self.n_r1 < -1e-6:
            raise ValueError(f"n_r1 must be >= 0, got {self.n_r1}")

    @property
    def n_c1(self) -> float:
        return abs(self.psi1) ** 2

    @property
    def n_c2(self) -> float:
        return abs(self.psi2) ** 2

    @property
    def n_ct(self) -> float:
        return self.n_c1 + self.n_c2


@dataclass(frozen=True)
class ReducedState:
    """Variables of the reduced equations of motion.

    zeta  -- population imbalance (N_c1 - N_c2)/N_cT in [-1, 1]
    delta_phi -- phase difference arg(Psi_2) - arg(Psi_1), radians
    n_ct  -- total condensate number, n_r1 -- reservoir number
    """

    zeta: float
    delta_phi: float
    n_ct: float
    n_r1: float

    def __post_init__(self):
        if abs(self.zeta) > 1 + 1e-12:
            raise ValueError(f"zeta must lie in [-1, 1], got {self.zeta}")
        if self.n_ct < -1e-12:
            raise ValueError(f"n_ct must be >= 0, got {self.n_ct}")


@dataclass(frozen=True)
class OnSiteEnergies:
    """Complex on-site energies and the potentials they are built from.

    v12_r is the full real energy difference across the junction,
    eps12 + V12^R (the effective detuning).
    """

    e1: complex
    e2: complex
    v1_i: float
    v2_i: float
    v12_r: float


class FullDerivative(NamedTuple):
    """Time derivative of a FullState (n_r1 part may be negative)."""

    dpsi1: complex
    dpsi2: complex
    dn_r1: float


def wrap_phase(phi: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    w = math.atan2(math.sin(phi), math.cos(phi))
    if w <= -math.pi:
        w = math.pi
    return w


def onsite_energies(params: ModelParams, state: FullState) -> OnSiteEnergies:
    """Complex on-site energies at the given state.

    The real parts carry the bare energies, the self-interaction blue shift
    U_j N_cj and the reservoir/exciton potentials (or the constant detuning
    override); the imaginary parts carry half the net gain/loss rates.
    """
    v1_i, v2_i = params.imag_potentials(state.n_r1)
    detuning = params.detuning(state.n_r1)
    if params.detuning_override is not None:
        # constant-detuning mode: put the whole energy difference on site 1
        e1_r = params.eps1 + (detuning - (params.eps1 - params.eps2)) + params.u1 * state.n_c1
        e2_r = params.eps2 + params.u2 * state.n_c2
    else:
        v1_r = (params.g_tilde / params.area_1) * state.n_r1 + params.g_exciton1 * params.pump_p1
        e1_r = params.eps1 + v1_r + params.u1 * state.n_c1
        e2_r = params.eps2 + params.u2 * state.n_c2
    return OnSiteEnergies(
        e1=complex(e1_r, v1_i),
        e2=complex(e2_r, v2_i),
        v1_i=v1_i,
        v2_i=v2_i,
        v12_r=detuning,
    )


def gpe_rhs(params: ModelParams, state: FullState) -> FullDerivative:
    """Right-hand side of the coupled condensate/reservoir equations."""
    en = onsite_energies(params, state)
    coupling = params.tunneling
    dpsi1 = -1j * (en.e1 * state.psi1 - coupling * state.psi2)
    dpsi2 = -1j * (en.e2 * state.psi2 - coupling * state.psi1)
    dn_r1 = (
        params.pump_p1
        - params.gamma_r1 * state.n_r1
        - params.r1_prime * state.n_r1 * state.n_c1
    )
    return FullDerivative(dpsi1, dpsi2, dn_r1)


def reduced_from_full(state: FullState) -> ReducedState:
    """Change of variables to (imbalance, phase difference, totals).

    Raises ZeroCondensate when both amplitudes vanish.
    """
    n_ct = state.n_ct
    if n_ct == 0.0:
        raise ZeroCondensate("zeta and delta_phi are undefined at N_cT = 0")
    zeta = (state.n_c1 - state.n_c2) / n_ct
    delta_phi = wrap_phase(cmath.phase(state.psi2) - cmath.phase(state.psi1))
    return ReducedState(zeta=zeta, delta_phi=delta_phi, n_ct=n_ct, n_r1=state.n_r1)


def full_from_reduced(s: ReducedState) -> FullState:
    """Inverse change of variables with the site-1 phase gauge-fixed to zero."""
    n_c1 = 0.5 * s.n_ct * (1.0 + s.zeta)
    n_c2 = 0.5 * s.n_ct * (1.0 - s.zeta)
    return FullState(
        psi1=complex(math.sqrt(max(n_c1, 0.0)), 0.0),
        psi2=math.sqrt(max(n_c2, 0.0)) * cmath.exp(1j * s.delta_phi),
        n_r1=s.n_r1,
    )


def self_trapping_parameter(params: ModelParams, n_ct: float) -> float:
    """Diagnostic Lambda = U_mean * N_cT / (2 J)."""
    return params.u_mean * n_ct / (2.0 * params.j_coupling)
