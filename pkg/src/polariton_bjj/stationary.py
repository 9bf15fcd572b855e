"""Stationary condensate states of the one-side-pumped junction.

A stationary state Psi(t) = Psi(0) exp(-i Omega t) with real Omega exists
where one of the two eigenvalues

    Omega_pm = (E1 + E2)/2 +- sqrt((E1 - E2)^2 + 4 J^2) / 2

of the nonlinear Hamiltonian is real.  Writing the stimulated scattering as
R1 = R1' N_R1, population balance on the unpumped site fixes

    N_R1 = R1 / R1',        N_c2 = ((R1 - gamma1) / gamma2) N_c1,

and the pumping that sustains the state is P1 = gamma_R1 N_R1 + R1 N_c1.
This parametrization reduces the search for states to one-dimensional root
finding of Im(Omega) = 0, either in N_c1 at fixed R1 (branches_vs_r1) or in
R1 at fixed pumping (all_states_at_pumping).

At zero detuning the line R1 = gamma1 + gamma2 is special: gain on site 1
exactly balances loss on site 2 (E1 = E2*), Im(Omega) vanishes for every
N_c1, and the two balanced states come out in closed form
(pt_symmetric_states).  They exist only while J >= gamma2/2; the equality
is the exceptional point where both coalesce.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .errors import BelowThreshold, PtBroken
from .model import FullState, ModelParams, gpe_rhs, wrap_phase

# Branch labels for stationary states.
PT_BONDING = "pt_bonding"
PT_ANTIBONDING = "pt_antibonding"
SELF_TRAPPED = "self_trapped"
UNTRAPPED = "untrapped"
NON_CONDENSED = "non_condensed"

# Deterministic report ordering of the labels.
LABEL_ORDER = (NON_CONDENSED, PT_BONDING, PT_ANTIBONDING, SELF_TRAPPED, UNTRAPPED)

BRANCH_PLUS = "plus"
BRANCH_MINUS = "minus"

# Numerically-exact invariants of every returned state.
IMAG_OMEGA_TOL = 1e-10
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class StationaryState:
    """A fixed point of the full equations of motion.

    ``branch`` is one of the five labels above; ``stability`` is filled by
    the stability module (None until classified).  For the non-condensed
    state the condensate fields (omega, delta_phi, zeta) are physically
    meaningless and set to zero.
    """

    branch: str
    omega: float
    n_c1: float
    n_c2: float
    n_r1: float
    delta_phi: float
    p1: float
    zeta: float
    stability: object | None = None

    @property
    def n_ct(self) -> float:
        return self.n_c1 + self.n_c2

    @property
    def is_condensed(self) -> bool:
        return self.branch != NON_CONDENSED


def full_state_of(st: StationaryState) -> FullState:
    """Condensate amplitudes of a stationary state, site-1 phase gauged to zero."""
    return FullState(
        psi1=complex(math.sqrt(max(st.n_c1, 0.0)), 0.0),
        psi2=math.sqrt(max(st.n_c2, 0.0)) * cmath.exp(1j * st.delta_phi),
        n_r1=st.n_r1,
    )


def fixed_point_residual(params: ModelParams, st: StationaryState) -> float:
    """max of |dPsi/dt + i Omega Psi| and |dN_R1/dt| at the state's pumping."""
    p = replace(params, pump_p1=st.p1)
    fs = full_state_of(st)
    d = gpe_rhs(p, fs)
    r1 = abs(d.dpsi1 + 1j * st.omega * fs.psi1)
    r2 = abs(d.dpsi2 + 1j * st.omega * fs.psi2)
    return max(r1, r2, abs(d.dn_r1))


def exceptional_point(params: ModelParams) -> float:
    """Tunneling at which the two balanced states coalesce: gamma2 / 2."""
    if params.gamma2 < 0:
        raise ValueError("gamma2 must be >= 0")
    return 0.5 * params.gamma2


def _require_real_tunneling(params: ModelParams):
    if params.radiative_gamma != 0.0:
        raise ValueError(
            "stationary analysis assumes a real tunneling; radiative coupling "
            "(radiative_gamma != 0) breaks the population-balance parametrization"
        )


def _require_lossy_site2(params: ModelParams):
    # the flux parametrization N_c2/N_c1 = (R1 - gamma1)/gamma2 needs gamma2 > 0
    if params.gamma2 <= 0:
        raise ValueError("imbalanced-branch analysis requires gamma2 > 0")


def _zero_detuning(params: ModelParams) -> bool:
    if params.detuning_override is not None:
        return params.detuning_override == 0.0
    return (
        params.eps1 == params.eps2
        and params.g_tilde == 0.0
        and params.g_exciton1 == 0.0
    )


def _eigen_energies(params: ModelParams, r1: float, n_c1: float, n_c2: float):
    """Both eigenvalues at populations fixed by the flux parametrization."""
    n_r1 = r1 / params.r1_prime
    det = params.detuning(n_r1)
    e1 = complex(det + params.u1 * n_c1, 0.5 * (r1 - params.gamma1))
    e2 = complex(params.u2 * n_c2, -0.5 * params.gamma2)
    split = 0.5 * cmath.sqrt((e1 - e2) ** 2 + 4.0 * params.j_coupling**2)
    mean = 0.5 * (e1 + e2)
    return mean + split, mean - split, e1, e2


def _imag_omega(params: ModelParams, sign: int, r1: float, n_c1: float) -> float:
    n_c2 = ((r1 - params.gamma1) / params.gamma2) * n_c1
    plus, minus, _, _ = _eigen_energies(params, r1, n_c1, n_c2)
    return plus.imag if sign > 0 else minus.imag


def _bisect(f, lo, hi, f_lo, f_hi, rel_tol=1e-12):
    """Plain bisection on a bracketing interval; returns the midpoint."""
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= rel_tol * max(abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def _assemble(params: ModelParams, sign: int, r1: float, n_c1: float,
              p1: float | None = None) -> StationaryState | None:
    """Build a state from a root of Im(Omega); None if it fails the invariants.

    Sign-change scanning can latch onto branch-cut jumps of the complex
    square root; those impostors are rejected here by the Im(Omega) and
    fixed-point residual checks.
    """
    if n_c1 < 0:
        return None
    n_r1 = r1 / params.r1_prime
    n_c2 = ((r1 - params.gamma1) / params.gamma2) * n_c1
    if n_c2 < 0:
        return None
    plus, minus, e1, _ = _eigen_energies(params, r1, n_c1, n_c2)
    omega = plus if sign > 0 else minus
    if abs(omega.imag) > IMAG_OMEGA_TOL:
        return None
    # phase from the eigenvector ratio Psi2/Psi1 = (E1 - Omega)/J
    ratio = (e1 - omega) / params.j_coupling
    delta_phi = wrap_phase(cmath.phase(ratio)) if n_c2 > 0 else 0.0
    n_ct = n_c1 + n_c2
    zeta = (n_c1 - n_c2) / n_ct if n_ct > 0 else 0.0
    if p1 is None:
        p1 = params.gamma_r1 * n_r1 + r1 * n_c1
    if p1 < 0:
        return None
    st = StationaryState(
        branch=BRANCH_PLUS if sign > 0 else BRANCH_MINUS,
        omega=omega.real,
        n_c1=n_c1,
        n_c2=n_c2,
        n_r1=n_r1,
        delta_phi=delta_phi,
        p1=p1,
        zeta=zeta,
    )
    if fixed_point_residual(params, st) > RESIDUAL_TOL:
        return None
    return st


def pt_symmetric_states(params: ModelParams, p1: float) -> list[StationaryState]:
    """The two gain-loss-balanced states, bonding-like first.

    Requires zero effective detuning and equal charging energies.  Raises
    BelowThreshold when the pumping cannot fill the reservoir to the
    balance level, and PtBroken when J < gamma2/2 (no real spectrum).
    """
    _require_real_tunneling(params)
    if not _zero_detuning(params) or params.u1 != params.u2:
        raise ValueError(
            "balanced states require zero effective detuning and u1 == u2"
        )
    j, g2 = params.j_coupling, params.gamma2
    if j * j < 0.25 * g2 * g2:
        raise PtBroken(
            f"J^2 = {j*j} < gamma2^2/4 = {0.25*g2*g2}: gain-loss symmetry broken"
        )
    n_r1 = params.pt_reservoir_level
    r1 = params.r1_prime * n_r1
    n_c = (p1 - params.gamma_r1 * n_r1) / r1
    if n_c < 0:
        raise BelowThreshold(
            f"p1={p1} below gamma_R1*(gamma1+gamma2)/R1' = {params.gamma_r1 * n_r1}"
        )
    # sin(delta_phi) = V12^I / (2J) = gamma2 / (2J); bonding-like state in
    # (0, pi/2], antibonding-like in [pi/2, pi)
    s = 0.5 * g2 / j
    phi_minus = math.asin(min(s, 1.0))
    phi_plus = math.pi - phi_minus
    re_e = params.u1 * n_c  # common real on-site energy (zero detuning)
    split = math.sqrt(max(j * j - 0.25 * g2 * g2, 0.0))
    states = []
    for label, omega, phi in (
        (PT_BONDING, re_e - split, phi_minus),
        (PT_ANTIBONDING, re_e + split, phi_plus),
    ):
        states.append(
            StationaryState(
                branch=label,
                omega=omega,
                n_c1=n_c,
                n_c2=n_c,
                n_r1=n_r1,
                delta_phi=phi,
                p1=p1,
                zeta=0.0,
            )
        )
    return states


def _scan_roots(f, grid) -> list[float]:
    """All sign-change roots of f on a monotone grid."""
    roots = []
    x_prev = grid[0]
    f_prev = f(x_prev)
    for x in grid[1:]:
        fx = f(x)
        if f_prev == 0.0:
            roots.append(x_prev)
        elif fx != 0.0 and (fx > 0) != (f_prev > 0):
            roots.append(_bisect(f, x_prev, x, f_prev, fx))
        x_prev, f_prev = x, fx
    if f_prev == 0.0:
        roots.append(x_prev)
    return roots


def _log_grid(lo: float, hi: float, n: int) -> list[float]:
    la, lb = math.log(lo), math.log(hi)
    return [math.exp(la + (lb - la) * i / (n - 1)) for i in range(n)]


def branches_vs_r1(
    params: ModelParams,
    branch: str,
    r1_grid,
    n_c1_max: float | None = None,
    scan_points: int = 2000,
) -> list[StationaryState]:
    """States of one eigenvalue branch along a grid of stimulated scattering.

    For each R1 > gamma1 the condition Im(Omega) = 0 is solved for N_c1 by a
    deterministic sign-change scan over a log-spaced grid up to n_c1_max
    followed by bisection.  Grid points with no root contribute nothing (a
    valid outcome: the branch is absent there).

    At zero detuning the line R1 = gamma1 + gamma2 satisfies Im(Omega) = 0
    identically (N_c1 is not pinned by R1 alone); it is emitted as a sample
    of balanced states along the scan grid so sweeps show the full line.
    """
    _require_real_tunneling(params)
    _require_lossy_site2(params)
    if branch not in (BRANCH_PLUS, BRANCH_MINUS):
        raise ValueError(f"branch must be '{BRANCH_PLUS}' or '{BRANCH_MINUS}'")
    sign = +1 if branch == BRANCH_PLUS else -1
    if n_c1_max is None:
        n_c1_max = 1000.0
    pt_line = params.pt_reservoir_level * params.r1_prime
    out = []
    for r1 in r1_grid:
        if r1 <= params.gamma1:
            raise ValueError(f"grid values must satisfy R1 > gamma1, got {r1}")
        if _zero_detuning(params) and abs(r1 - pt_line) <= 1e-9 * pt_line:
            if params.u1 == params.u2 and params.j_coupling >= 0.5 * params.gamma2:
                # degenerate balanced line: sample it instead of root finding
                for n_c1 in _log_grid(1e-3, n_c1_max, 33):
                    st = _assemble(params, sign, r1, n_c1)
                    if st is not None:
                        out.append(st)
            continue
        grid = _log_grid(1e-9, n_c1_max, scan_points)
        for n_c1 in _scan_roots(lambda n: _imag_omega(params, sign, r1, n), grid):
            st = _assemble(params, sign, r1, n_c1)
            if st is not None:
                out.append(st)
    out.sort(key=lambda s: (s.n_r1, s.branch, s.n_c1))
    return out


def _label_slice(params: ModelParams, roots: list[StationaryState]) -> list[StationaryState]:
    """Assign physical labels to the condensed roots of one pumping slice.

    The dominant root (largest N_c1) is the self-trapped state; at zero
    detuning every other root belongs to the weakly-condensed untrapped
    branch (its imbalance changes sign along the branch, so the sign of
    zeta alone is not a reliable discriminator).  Under detuning, roots
    near the gain-loss balance line with moderate imbalance are labeled as
    the corresponding balanced-like state.
    """
    if not roots:
        return []
    zero_det = _zero_detuning(params)
    pt_line = params.pt_reservoir_level * params.r1_prime
    ranked = sorted(roots, key=lambda s: -s.n_c1)
    labeled = []
    for i, st in enumerate(ranked):
        if i == 0:
            label = SELF_TRAPPED
        elif not zero_det and (
            abs(st.n_r1 * params.r1_prime - pt_line) <= 0.5 * pt_line
            and abs(st.zeta) <= 0.6
        ):
            label = PT_ANTIBONDING if st.branch == BRANCH_PLUS else PT_BONDING
        else:
            label = UNTRAPPED
        labeled.append(replace(st, branch=label))
    return labeled


def _dedup(states: list[StationaryState], tol: float = 1e-6) -> list[StationaryState]:
    kept: list[StationaryState] = []
    for st in states:
        dup = any(
            abs(st.n_c1 - k.n_c1) < tol
            and abs(st.n_c2 - k.n_c2) < tol
            and abs(st.omega - k.omega) < tol
            for k in kept
        )
        if not dup:
            kept.append(st)
    return kept


def all_states_at_pumping(
    params: ModelParams, p1: float, scan_points: int = 2000
) -> list[StationaryState]:
    """Every stationary state at a fixed pumping strength.

    The pumping balance pins N_c1 = (p1 - gamma_R1 R1/R1')/R1 at each R1, so
    the two-equation system collapses to scanning Im(Omega_pm)(R1) = 0 over
    R1 in (gamma1, R1' p1 / gamma_R1] for both eigenvalue branches.  The
    closed-form balanced pair is appended when it applies, and the
    non-condensed solution (N_R1 = p1/gamma_R1) is always included.
    States closer than 1e-6 in (N_c1, N_c2, Omega) are deduplicated,
    preferring the closed-form representative.
    """
    _require_real_tunneling(params)
    _require_lossy_site2(params)
    if p1 < 0:
        raise ValueError(f"p1 must be >= 0, got {p1}")
    params = replace(params, pump_p1=p1)

    states: list[StationaryState] = [
        StationaryState(
            branch=NON_CONDENSED,
            omega=0.0,
            n_c1=0.0,
            n_c2=0.0,
            n_r1=p1 / params.gamma_r1,
            delta_phi=0.0,
            p1=p1,
            zeta=0.0,
        )
    ]

    pt_pair: list[StationaryState] = []
    if (
        _zero_detuning(params)
        and params.u1 == params.u2
        and params.j_coupling >= 0.5 * params.gamma2
        and p1 >= params.gamma_r1 * params.pt_reservoir_level
    ):
        pt_pair = pt_symmetric_states(params, p1)

    roots: list[StationaryState] = []
    r_hi = params.r1_prime * p1 / params.gamma_r1
    r_lo = params.gamma1
    if r_hi > r_lo:
        # log-spaced in the offset above gamma1: the dominant root approaches
        # gamma1 like 1/P1^2, far below any linear grid resolution
        span = r_hi - r_lo
        grid = [r_lo + off for off in _log_grid(1e-12 * span, span, scan_points)]

        def n_c1_of(r1):
            return (p1 - params.gamma_r1 * r1 / params.r1_prime) / r1

        for sign in (+1, -1):

            def g(r1, _s=sign):
                return _imag_omega(params, _s, r1, n_c1_of(r1))

            for r1 in _scan_roots(g, grid):
                st = _assemble(params, sign, r1, n_c1_of(r1), p1=p1)
                if st is not None:
                    roots.append(st)

    states.extend(_dedup(pt_pair + _label_slice(params, roots)))
    states.sort(key=lambda s: (LABEL_ORDER.index(s.branch), -s.n_c1))
    return states
