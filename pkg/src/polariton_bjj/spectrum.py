"""Fluctuation spectrum of the empty junction and the condensation threshold.

Linearizing the equations of motion around the non-condensed solution
(Psi = 0, N_R1 = P1/gamma_R1) gives two complex mode frequencies

    omega_pm = (E1 + E2)/2 +- sqrt((E1 - E2)^2 + 4 (J + i Gamma)^2) / 2

evaluated at zero condensate.  Condensation sets in at the smallest
reservoir occupation where max Im(omega) reaches zero.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import NoThreshold
from .model import FullState, ModelParams, onsite_energies


@dataclass(frozen=True)
class NonCondensedSpectrum:
    """Both fluctuation frequencies, plus-branch having the larger real part
    (ties broken by the larger imaginary part)."""

    omega_plus: complex
    omega_minus: complex

    @property
    def max_growth(self) -> float:
        """Largest growth rate of condensate fluctuations (Im omega)."""
        return max(self.omega_plus.imag, self.omega_minus.imag)


class ThresholdResult(NamedTuple):
    p_th: float
    n_r_th: float


def non_condensed_spectrum(params: ModelParams, n_r1: float) -> NonCondensedSpectrum:
    """Fluctuation frequencies of the empty junction at reservoir number n_r1."""
    if n_r1 < 0:
        raise ValueError(f"n_r1 must be >= 0, got {n_r1}")
    en = onsite_energies(params, FullState(0j, 0j, n_r1))
    mean = 0.5 * (en.e1 + en.e2)
    split = 0.5 * cmath.sqrt((en.e1 - en.e2) ** 2 + 4.0 * params.tunneling**2)
    plus, minus = mean + split, mean - split
    if (plus.real, plus.imag) < (minus.real, minus.imag):
        plus, minus = minus, plus
    return NonCondensedSpectrum(omega_plus=plus, omega_minus=minus)


def threshold_pumping(params: ModelParams) -> ThresholdResult:
    """Threshold pumping: smallest N_R1 with max Im(omega) = 0, times gamma_R1.

    Below threshold the reservoir balance is exactly N_R1 = P1/gamma_R1, so
    the root is found by bisection in N_R1 on the physical bracket
    [gamma1/R1', (gamma1+gamma2)/R1'] and mapped back to P1.  Raises
    NoThreshold when the growth rate never reaches zero on the bracket.
    """
    if params.gamma1 <= 0 and params.gamma2 <= 0:
        raise ValueError("at least one condensate decay rate must be positive")
    if params.r1_prime <= 0:
        raise ValueError("r1_prime must be positive")

    def growth(n):
        return non_condensed_spectrum(params, n).max_growth

    lo = params.gamma1 / params.r1_prime
    hi = (params.gamma1 + params.gamma2) / params.r1_prime
    g_lo = growth(lo)
    if g_lo >= 0.0:
        # gain already compensates the decay of the uncoupled pumped site
        return ThresholdResult(p_th=params.gamma_r1 * lo, n_r_th=lo)
    g_hi = growth(hi)
    if g_hi < 0.0:
        raise NoThreshold(
            f"max growth stays negative up to N_R1={hi} (g={g_hi}); check parameters"
        )
    # bisection; 60 halvings take the bracket far below 1e-12 relative width
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if growth(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * hi:
            break
    n_r_th = 0.5 * (lo + hi)
    return ThresholdResult(p_th=params.gamma_r1 * n_r_th, n_r_th=n_r_th)


def threshold_vs_coupling(
    params: ModelParams, j_grid: list[float]
) -> list[tuple[float, ThresholdResult]]:
    """Threshold pumping for each tunneling value in j_grid."""
    if not list(j_grid):
        raise ValueError("j_grid must be non-empty")
    out = []
    for j in j_grid:
        if j < 0:
            raise ValueError(f"tunneling values must be >= 0, got {j}")
        out.append((j, threshold_pumping(replace(params, j_coupling=j))))
    return out
