"""Time evolution, steady-state detection, pumping sweeps and basin maps.

The primary integrator works on the full complex amplitudes (five real
degrees of freedom), which stays regular even when the imbalance approaches
|zeta| = 1; the reduced four-variable flow is integrated only for
cross-checks and reduced-model studies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ZeroCondensate
from .integrate import integrate_adaptive, integrate_euler_maruyama
from .model import (
    FullState,
    ModelParams,
    ReducedState,
    full_from_reduced,
    gpe_rhs,
    reduced_from_full,
    wrap_phase,
)
from .stability import reduced_rhs
from .stationary import NON_CONDENSED, StationaryState, all_states_at_pumping

# condensates below this occupation count as empty for chart purposes
_DEAD_CONDENSATE = 1e-120
# below this occupation the reduced chart carries no useful signal for
# steady-state detection (phases of a near-vacuum field keep precessing);
# attractor populations are O(1)-O(100), so this is far below any of them
_EMPTY_CONDENSATE = 1e-6


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution of the full model.

    ``delta_phi`` is continuously unwrapped: adjacent samples never jump by
    +-2pi, so the stored values differ from the wrapped phase only by
    integer multiples of 2pi.
    """

    times: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray
    n_r1: np.ndarray
    delta_phi: np.ndarray

    @property
    def n_c1(self) -> np.ndarray:
        return np.abs(self.psi1) ** 2

    @property
    def n_c2(self) -> np.ndarray:
        return np.abs(self.psi2) ** 2

    @property
    def n_ct(self) -> np.ndarray:
        return self.n_c1 + self.n_c2

    @property
    def zeta(self) -> np.ndarray:
        n_ct = self.n_ct
        with np.errstate(invalid="ignore", divide="ignore"):
            z = (self.n_c1 - self.n_c2) / n_ct
        return np.where(n_ct > 0, z, 0.0)

    def state_at(self, i: int) -> FullState:
        return FullState(
            psi1=complex(self.psi1[i]),
            psi2=complex(self.psi2[i]),
            n_r1=max(float(self.n_r1[i]), 0.0),
        )

    def reduced_at(self, i: int) -> ReducedState:
        """Reduced variables at sample i, phase taken from the unwrapped series."""
        return ReducedState(
            zeta=float(self.zeta[i]),
            delta_phi=float(self.delta_phi[i]),
            n_ct=float(self.n_ct[i]),
            n_r1=max(float(self.n_r1[i]), 0.0),
        )

    @property
    def states(self) -> list[FullState]:
        return [self.state_at(i) for i in range(len(self.times))]

    @property
    def final_state(self) -> FullState:
        return self.state_at(-1)


def _pack(state: FullState) -> np.ndarray:
    return np.array(
        [state.psi1.real, state.psi1.imag, state.psi2.real, state.psi2.imag, state.n_r1]
    )


def _unpack(y: np.ndarray) -> FullState:
    return FullState(
        psi1=complex(y[0], y[1]), psi2=complex(y[2], y[3]), n_r1=max(float(y[4]), 0.0)
    )


def _rhs_full(params: ModelParams):
    def f(t, y):
        d = gpe_rhs(params, _unpack(y))
        return np.array(
            [d.dpsi1.real, d.dpsi1.imag, d.dpsi2.real, d.dpsi2.imag, d.dn_r1]
        )

    return f


def _trajectory_from(times: np.ndarray, ys: np.ndarray) -> Trajectory:
    psi1 = ys[:, 0] + 1j * ys[:, 1]
    psi2 = ys[:, 2] + 1j * ys[:, 3]
    wrapped = np.angle(psi2) - np.angle(psi1)
    return Trajectory(
        times=times,
        psi1=psi1,
        psi2=psi2,
        n_r1=ys[:, 4],
        delta_phi=np.unwrap(wrapped),
    )


def evolve(
    params: ModelParams,
    init: FullState,
    t_final: float,
    dt_max: float = 0.5,
    noise_sigma: float = 0.0,
    seed: int = 0,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    sample_dt: float | None = None,
) -> Trajectory:
    """Integrate the full model from ``init`` for ``t_final`` time units.

    Deterministic adaptive integration by default.  With noise_sigma > 0
    the trajectory switches to fixed-step Euler-Maruyama at step dt_max,
    adding an independent complex Gaussian increment of standard deviation
    noise_sigma*sqrt(dt) to each condensate amplitude per step (the
    reservoir stays noise-free); the seed makes runs reproducible.
    """
    if t_final <= 0:
        raise ValueError(f"t_final must be > 0, got {t_final}")
    if noise_sigma < 0:
        raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
    if sample_dt is None:
        sample_dt = t_final / 2000.0
    n = max(2, int(round(t_final / sample_dt)) + 1)
    times = np.linspace(0.0, t_final, n)
    f = _rhs_full(params)
    if noise_sigma == 0.0:
        ys = integrate_adaptive(
            f, _pack(init), times, rtol=rtol, atol=atol, max_step=dt_max
        )
    else:
        # noise_sigma*sqrt(dt) split evenly between quadratures
        per_quad = noise_sigma * math.sqrt(dt_max) / math.sqrt(2.0)
        noise_std = np.array([per_quad, per_quad, per_quad, per_quad, 0.0])
        ys = integrate_euler_maruyama(
            f,
            _pack(init),
            times,
            dt=dt_max,
            noise_std=noise_std,
            rng=np.random.default_rng(seed),
        )
    return _trajectory_from(times, ys)


def evolve_reduced(
    params: ModelParams,
    init: ReducedState,
    t_final: float,
    dt_max: float = 0.5,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    sample_dt: float | None = None,
):
    """Integrate the reduced four-variable flow; returns (times, samples).

    Sample columns are (zeta, delta_phi, n_ct, n_r1) with the phase left
    unwrapped exactly as integrated.
    """
    if sample_dt is None:
        sample_dt = t_final / 2000.0
    n = max(2, int(round(t_final / sample_dt)) + 1)
    times = np.linspace(0.0, t_final, n)

    def f(t, y):
        d = reduced_rhs(
            params,
            ReducedState(
                zeta=float(y[0]),
                delta_phi=float(y[1]),
                n_ct=max(float(y[2]), 0.0),
                n_r1=max(float(y[3]), 0.0),
            ),
        )
        return np.array(d)

    ys = integrate_adaptive(f, np.array(
        [init.zeta, init.delta_phi, init.n_ct, init.n_r1]
    ), times, rtol=rtol, atol=atol, max_step=dt_max)
    return times, ys


def reduced_velocity(params: ModelParams, state: FullState) -> np.ndarray:
    """d/dt of (zeta, delta_phi, n_ct, n_r1) along the full flow (chain rule).

    Computed from gpe_rhs, independently of the closed-form reduced
    equations, which makes it the cross-check oracle for reduced_rhs.
    Raises ZeroCondensate when either mode is empty.
    """
    n1, n2 = state.n_c1, state.n_c2
    if n1 <= _DEAD_CONDENSATE or n2 <= _DEAD_CONDENSATE:
        raise ZeroCondensate("chain rule needs both condensate modes occupied")
    d = gpe_rhs(params, state)
    dn1 = 2.0 * (state.psi1.conjugate() * d.dpsi1).real
    dn2 = 2.0 * (state.psi2.conjugate() * d.dpsi2).real
    n_ct = n1 + n2
    dn_ct = dn1 + dn2
    zeta = (n1 - n2) / n_ct
    dzeta = ((dn1 - dn2) - zeta * dn_ct) / n_ct
    dphi = (d.dpsi2 / state.psi2).imag - (d.dpsi1 / state.psi1).imag
    return np.array([dzeta, dphi, dn_ct, d.dn_r1])


def _velocity_norm(params: ModelParams, state: FullState) -> float:
    """Norm of the reduced velocity; falls back to the population/reservoir
    rates when the condensate is (numerically) empty and the chart carries
    no signal."""
    if state.n_ct <= _EMPTY_CONDENSATE or min(state.n_c1, state.n_c2) <= _DEAD_CONDENSATE:
        d = gpe_rhs(params, state)
        dn1 = 2.0 * (state.psi1.conjugate() * d.dpsi1).real
        dn2 = 2.0 * (state.psi2.conjugate() * d.dpsi2).real
        return float(math.hypot(dn1 + dn2, d.dn_r1))
    return float(np.linalg.norm(reduced_velocity(params, state)))


@dataclass(frozen=True)
class SettleResult:
    state: FullState
    converged: bool
    matched: StationaryState | None
    t_end: float


def match_state(
    state: FullState, catalogue: list[StationaryState], tol: float = 1e-3
) -> StationaryState | None:
    """Nearest catalogue entry within tolerance in (zeta, N_cT, N_R1, dphi).

    Population distances are relative; imbalance and phase difference are
    compared absolutely (both dimensionless and order one).  The phase term
    is required: the two gain-loss-balanced states share identical
    (zeta, N_cT, N_R1) and differ only in their phase difference.
    """
    n_ct = state.n_ct
    best, best_d = None, math.inf
    for st in catalogue:
        if st.branch == NON_CONDENSED or st.n_ct == 0.0:
            d = max(n_ct / (1.0 + st.n_ct), abs(state.n_r1 - st.n_r1) / (1.0 + st.n_r1))
        else:
            if n_ct <= _DEAD_CONDENSATE:
                continue
            reduced = reduced_from_full(state)
            d = max(
                abs(reduced.zeta - st.zeta),
                abs(n_ct - st.n_ct) / (1.0 + st.n_ct),
                abs(state.n_r1 - st.n_r1) / (1.0 + st.n_r1),
                abs(wrap_phase(reduced.delta_phi - st.delta_phi)) / math.pi,
            )
        if d < best_d:
            best, best_d = st, d
    return best if best_d <= tol else None


def settle(
    params: ModelParams,
    init: FullState,
    t_max: float,
    catalogue: list[StationaryState] | None = None,
    window: float = 10.0,
    vel_tol: float = 1e-8,
    match_tol: float = 1e-3,
) -> SettleResult:
    """Integrate until the reduced velocity stays below vel_tol for a full
    window (10 time units by default) or t_max is reached, then match the
    endpoint against the stationary catalogue."""
    if t_max <= 0:
        raise ValueError(f"t_max must be > 0, got {t_max}")
    if catalogue is None:
        catalogue = all_states_at_pumping(params, params.pump_p1)
    state = init
    t = 0.0
    converged = False
    while t < t_max:
        chunk = min(window, t_max - t)
        traj = evolve(params, state, chunk, sample_dt=chunk / 10.0)
        t += chunk
        state = traj.final_state
        if chunk >= window and all(
            _velocity_norm(params, traj.state_at(i)) < vel_tol
            for i in range(len(traj.times))
        ):
            converged = True
            break
    return SettleResult(
        state=state,
        converged=converged,
        matched=match_state(state, catalogue, match_tol),
        t_end=t,
    )


@dataclass(frozen=True)
class SweepResult:
    """Long-time averages along one leg of a pumping sweep."""

    direction: str
    p1: tuple[float, ...]
    n_ct_avg: tuple[float, ...]
    zeta_avg: tuple[float, ...]
    delta_phi_avg: tuple[float, ...]
    converged: tuple[bool, ...]


def _hold_and_average(params, state, t_hold, conv_tol):
    traj = evolve(params, state, t_hold, sample_dt=t_hold / 400.0)
    tail = slice(int(0.75 * len(traj.times)), None)
    n_ct = float(np.mean(traj.n_ct[tail]))
    zeta = float(np.mean(traj.zeta[tail]))
    dphi = float(np.mean(traj.delta_phi[tail]))
    conv = _velocity_norm(params, traj.final_state) < conv_tol
    return traj.final_state, n_ct, zeta, dphi, conv


def hysteresis_sweep(
    params: ModelParams,
    p_grid_up,
    p_grid_down,
    t_hold: float,
    seed_n_ct: float = 1e-6,
    conv_tol: float = 1e-6,
    down_init: FullState | None = None,
) -> tuple[SweepResult, SweepResult]:
    """Cyclic pumping sweep: up from vacuum, then down from the up endpoint.

    A small condensate seed (total occupation seed_n_ct on the pumped site)
    is injected at the first up step so the unstable empty state can depart
    above threshold in finite time; it stands in for spontaneous
    fluctuations.  Each step continues from the previous endpoint under the
    new pumping and records averages over the last quarter of the hold.

    ``down_init`` optionally replaces the down-sweep's starting state (for
    example a condensed state prepared at high pumping); by default the
    down sweep continues the cycle from the up sweep's endpoint.
    """
    up = list(p_grid_up)
    down = list(p_grid_down)
    if any(b < a for a, b in zip(up, up[1:])):
        raise ValueError("p_grid_up must be non-decreasing")
    if any(b > a for a, b in zip(down, down[1:])):
        raise ValueError("p_grid_down must be non-increasing")
    state = FullState(complex(math.sqrt(seed_n_ct), 0.0), 0j, 0.0)
    results = []
    for direction, grid in (("up", up), ("down", down)):
        if direction == "down" and down_init is not None:
            state = down_init
        p_out, n_out, z_out, f_out, c_out = [], [], [], [], []
        for p in grid:
            state, n_ct, zeta, dphi, conv = _hold_and_average(
                replace(params, pump_p1=p), state, t_hold, conv_tol
            )
            p_out.append(p)
            n_out.append(n_ct)
            z_out.append(zeta)
            f_out.append(dphi)
            c_out.append(conv)
        results.append(
            SweepResult(
                direction=direction,
                p1=tuple(p_out),
                n_ct_avg=tuple(n_out),
                zeta_avg=tuple(z_out),
                delta_phi_avg=tuple(f_out),
                converged=tuple(c_out),
            )
        )
    return results[0], results[1]


NON_CONVERGENT = "non_convergent"


@dataclass(frozen=True)
class BasinMap:
    """Attractor labels over a grid of initial (zeta, delta_phi)."""

    zeta_grid: tuple[float, ...]
    phi_grid: tuple[float, ...]
    labels: tuple[tuple[str, ...], ...]  # labels[i][j] for (zeta_i, phi_j)
    catalogue: tuple[StationaryState, ...]


def basin_map(
    params: ModelParams,
    p1: float,
    zeta_grid,
    phi_grid,
    n_ct0: float,
    n_r10: float,
    t_max: float,
) -> BasinMap:
    """Settle every grid cell and label it by the state it reaches."""
    zg = [float(z) for z in zeta_grid]
    pg = [float(p) for p in phi_grid]
    if any(abs(z) >= 1 for z in zg):
        raise ValueError("zeta grid must lie strictly inside (-1, 1)")
    p = replace(params, pump_p1=p1)
    catalogue = all_states_at_pumping(p, p1)
    rows = []
    for z in zg:
        row = []
        for phi in pg:
            init = full_from_reduced(
                ReducedState(zeta=z, delta_phi=phi, n_ct=n_ct0, n_r1=n_r10)
            )
            res = settle(p, init, t_max, catalogue=catalogue)
            # a catalogue match labels the cell even when the velocity
            # criterion has not yet been met at t_max (slow linear decay)
            if res.matched is not None:
                row.append(res.matched.branch)
            else:
                row.append(NON_CONVERGENT)
        rows.append(tuple(row))
    return BasinMap(
        zeta_grid=tuple(zg),
        phi_grid=tuple(pg),
        labels=tuple(rows),
        catalogue=tuple(catalogue),
    )
