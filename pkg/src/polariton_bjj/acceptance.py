"""Acceptance suite: every headline result checked at fixed tolerances.

Each criterion function returns a CriterionResult with the measured values
embedded in ``details`` so failures are diagnosable from the report alone.
The suite is deterministic (fixed seeds, fixed grids) and uses the baseline
micropillar parameters unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import PtBroken
from .model import FullState, ModelParams, ReducedState, full_from_reduced, gpe_rhs
from .reduced_models import (
    BROKEN,
    PI_LOCK,
    ZERO_LOCK,
    critical_current_check,
    locking_criterion,
)
from .spectrum import threshold_pumping
from .stability import classify, reduced_rhs
from .stationary import (
    NON_CONDENSED,
    PT_ANTIBONDING,
    PT_BONDING,
    SELF_TRAPPED,
    UNTRAPPED,
    all_states_at_pumping,
    exceptional_point,
    full_state_of,
    pt_symmetric_states,
)
from .dynamics import evolve, evolve_reduced, hysteresis_sweep, reduced_velocity
from .emission import line_weight, stable_states_for_emission


@dataclass(frozen=True)
class CriterionResult:
    cid: int
    name: str
    passed: bool
    details: str


def _baseline() -> ModelParams:
    return ModelParams()


def criterion_1() -> CriterionResult:
    """Threshold pumping at J = 0 and J = 0.1 (tolerance 1e-9)."""
    p0 = threshold_pumping(replace(_baseline(), j_coupling=0.0)).p_th
    p1 = threshold_pumping(_baseline()).p_th
    ok = abs(p0 - 5.0) <= 1e-9 and abs(p1 - 10.0) <= 1e-9
    return CriterionResult(
        1, "threshold pumping", ok,
        f"P_th(J=0)={p0!r} (want 5), P_th(J=0.1)={p1!r} (want 10)",
    )


def criterion_2() -> CriterionResult:
    """Balanced pair at P1 = 11: closed-form populations, phases, energies."""
    tol = 1e-9
    minus, plus = pt_symmetric_states(_baseline(), 11.0)
    w_minus = 0.05 - math.sqrt(0.03) / 2.0
    w_plus = 0.05 + math.sqrt(0.03) / 2.0
    errs = {
        "n_c1-": abs(minus.n_c1 - 5.0),
        "n_c2-": abs(minus.n_c2 - 5.0),
        "n_r1": abs(minus.n_r1 - 20.0),
        "sin(dphi)-": abs(math.sin(minus.delta_phi) - 0.5),
        "sin(dphi)+": abs(math.sin(plus.delta_phi) - 0.5),
        "omega-": abs(minus.omega - w_minus),
        "omega+": abs(plus.omega - w_plus),
        "n_c1+": abs(plus.n_c1 - 5.0),
    }
    worst = max(errs, key=errs.get)
    ok = all(e <= tol for e in errs.values())
    return CriterionResult(
        2, "balanced pair at P1=11", ok,
        f"worst deviation {worst}={errs[worst]:.3e} (tol {tol})",
    )


def criterion_3() -> CriterionResult:
    """Balanced states exist iff J >= gamma2/2; branches coalesce at the point."""
    params = _baseline()
    jc = exceptional_point(params)
    ok = jc == 0.05
    below_raises = False
    try:
        pt_symmetric_states(replace(params, j_coupling=0.05 - 1e-9), 11.0)
    except PtBroken:
        below_raises = True
    ok = ok and below_raises
    at = pt_symmetric_states(replace(params, j_coupling=0.05), 11.0)
    gap_at = abs(at[1].omega - at[0].omega)
    near = pt_symmetric_states(replace(params, j_coupling=0.05 + 1e-9), 11.0)
    gap_near = abs(near[1].omega - near[0].omega)
    ok = ok and gap_at <= 1e-12 and gap_near < 1e-3
    return CriterionResult(
        3, "exceptional point", ok,
        f"J_c={jc}, PtBroken below: {below_raises}, gap(J=J_c)={gap_at:.2e}, "
        f"gap(J=J_c+1e-9)={gap_near:.2e}",
    )


def criterion_4() -> CriterionResult:
    """Every catalogued state is a fixed point to 1e-8 at four pumpings."""
    params = _baseline()
    worst = 0.0
    worst_at = ""
    count = 0
    for p1 in (10.2, 11.0, 20.0, 50.0):
        for st in all_states_at_pumping(params, p1):
            fs = full_state_of(st)
            d = gpe_rhs(replace(params, pump_p1=p1), fs)
            r_psi = max(
                abs(d.dpsi1 + 1j * st.omega * fs.psi1),
                abs(d.dpsi2 + 1j * st.omega * fs.psi2),
            )
            r_res = abs(d.dn_r1)
            count += 1
            if max(r_psi, r_res) > worst:
                worst = max(r_psi, r_res)
                worst_at = f"{st.branch}@P1={p1}"
    ok = worst < 1e-8
    return CriterionResult(
        4, "fixed-point residuals", ok,
        f"{count} states, worst residual {worst:.3e} at {worst_at} (tol 1e-8)",
    )


def criterion_5() -> CriterionResult:
    """Stability pattern at P1=11 plus antibonding instability at P1=50."""
    params = _baseline()
    expected = {
        NON_CONDENSED: False,
        PT_BONDING: True,
        PT_ANTIBONDING: True,
        SELF_TRAPPED: True,
        UNTRAPPED: False,
    }
    got = {}
    for st in all_states_at_pumping(params, 11.0):
        got[st.branch] = classify(params, st).stable
    ok = got == expected
    plus50 = [s for s in all_states_at_pumping(params, 50.0) if s.branch == PT_ANTIBONDING]
    plus50_unstable = bool(plus50) and not classify(params, plus50[0]).stable
    ok = ok and plus50_unstable
    return CriterionResult(
        5, "stability pattern", ok,
        f"P1=11 verdicts {got}, antibonding unstable at P1=50: {plus50_unstable}",
    )


def criterion_6() -> CriterionResult:
    """Reduced flow equals the full flow: derivatives and trajectories."""
    params = replace(_baseline(), pump_p1=11.0)
    rng = np.random.default_rng(20240601)
    worst_d = 0.0
    for _ in range(100):
        s = ReducedState(
            zeta=rng.uniform(-0.9, 0.9),
            delta_phi=rng.uniform(-math.pi, math.pi),
            n_ct=rng.uniform(0.5, 30.0),
            n_r1=rng.uniform(0.0, 30.0),
        )
        via_full = reduced_velocity(params, full_from_reduced(s))
        direct = np.array(reduced_rhs(params, s))
        worst_d = max(worst_d, float(np.max(np.abs(via_full - direct))))
    worst_t = 0.0
    for _ in range(10):
        s = ReducedState(
            zeta=rng.uniform(-0.9, 0.9),
            delta_phi=rng.uniform(-math.pi, math.pi),
            n_ct=rng.uniform(0.5, 30.0),
            n_r1=rng.uniform(0.0, 30.0),
        )
        # tight integration keeps discretization error far below the bound:
        # the comparison probes the equations, not the stepper
        traj = evolve(params, full_from_reduced(s), 100.0, sample_dt=1.0,
                      rtol=1e-11, atol=1e-13)
        _, red = evolve_reduced(params, s, 100.0, sample_dt=1.0,
                                rtol=1e-11, atol=1e-13)
        dev = max(
            float(np.max(np.abs(traj.zeta - red[:, 0]))),
            float(np.max(np.abs(np.angle(np.exp(1j * (traj.delta_phi - red[:, 1])))))),
            float(np.max(np.abs(traj.n_ct - red[:, 2]))),
            float(np.max(np.abs(traj.n_r1 - red[:, 3]))),
        )
        worst_t = max(worst_t, dev)
    ok = worst_d <= 1e-8 and worst_t <= 1e-6
    return CriterionResult(
        6, "reduced/full equivalence", ok,
        f"worst derivative mismatch {worst_d:.3e} (tol 1e-8), "
        f"worst trajectory deviation {worst_t:.3e} (tol 1e-6)",
    )


def _final_phase(params: ModelParams, init: FullState, t_final: float) -> float:
    """Long-time phase difference: mean over the last tenth, reduced mod 2pi."""
    traj = evolve(params, init, t_final)
    tail = traj.delta_phi[int(0.9 * len(traj.times)):]
    return float(np.mean(tail)) % (2.0 * math.pi)


def criterion_7() -> CriterionResult:
    """Phase locking at pi with and without pumping, plus the lock predictor.

    The locked self-trapped state at P1=11 sits at delta_phi = pi -
    arcsin(sqrt(gamma2 (R1* - gamma1))/(2J)) ~ pi - 0.088: the junction
    current needed to feed the lossy site shifts the lock off pi by more
    than the 0.05 rad bound, so that leg fails by an intrinsic 0.038 rad.
    """
    params = _baseline()
    phi_11 = _final_phase(
        replace(params, pump_p1=11.0),
        full_from_reduced(ReducedState(zeta=0.95, delta_phi=0.0, n_ct=100.0, n_r1=20.0)),
        2000.0,
    )
    phi_0 = _final_phase(
        replace(params, pump_p1=0.0),
        full_from_reduced(ReducedState(zeta=0.9, delta_phi=0.0, n_ct=100.0, n_r1=0.0)),
        1000.0,
    )
    off_11 = abs(phi_11 - math.pi)
    off_0 = abs(phi_0 - math.pi)
    locks = [
        locking_criterion(replace(params, detuning_override=-1.0), n_ct=200.0) == PI_LOCK,
        locking_criterion(replace(params, detuning_override=0.0), n_ct=200.0) == PI_LOCK,
        locking_criterion(replace(params, detuning_override=1.0), n_ct=200.0) == PI_LOCK,
        locking_criterion(replace(params, detuning_override=-1.0), n_ct=10.0) == ZERO_LOCK,
    ]
    ok = off_11 <= 0.05 and off_0 <= 0.05 and all(locks)
    return CriterionResult(
        7, "pi-phase locking", ok,
        f"|dphi-pi|: P1=11 -> {off_11:.4f}, P1=0 -> {off_0:.4f} (tol 0.05); "
        f"lock predictor correct: {all(locks)}",
    )


def criterion_8() -> CriterionResult:
    """Cyclic pumping sweep: sub-threshold bistability window.

    Protocol per the sweep contract: up from a 1e-6 seed, down continuing
    from the up endpoint.  Deterministic growth from a microscopic seed is
    captured by the balanced (equal-population) branch for P1 < ~20 (the
    d.c. drive stays below the critical current during condensation), and
    that branch dies at threshold, so the down sweep cannot retain a
    macroscopic condensate below P1=10; the persistence clause fails by
    model dynamics, not by numerics.  The self-trapped branch itself does
    persist: re-running the down sweep started on it (down_init) shows the
    sub-threshold window, reported here for reference.
    """
    params = _baseline()
    up_grid = [8.8, 9.5, 10.2, 10.8, 11.4, 12.0]
    down_grid = [12.0, 11.2, 10.4, 9.6, 8.8, 8.4, 8.0]
    up, down = hysteresis_sweep(params, up_grid, down_grid, t_hold=1500.0)
    up_below = {p: n for p, n in zip(up.p1, up.n_ct_avg) if p < 10.0}
    down_below = {p: n for p, n in zip(down.p1, down.n_ct_avg) if p < 10.0}
    clause_up = any(n < 1e-3 for n in up_below.values())
    clause_down = any(
        n > 1.0 and up_below.get(p, 0.0) < 1e-3 for p, n in down_below.items()
    )
    up12 = up.n_ct_avg[up.p1.index(12.0)]
    down12 = down.n_ct_avg[down.p1.index(12.0)]
    clause_meet = abs(up12 - down12) <= 1e-2 * max(down12, 1e-30)
    # reference run with the down sweep prepared on the self-trapped branch
    st12 = [s for s in all_states_at_pumping(params, 12.0) if s.branch == SELF_TRAPPED][0]
    _, down_ref = hysteresis_sweep(
        params, [12.0], down_grid, t_hold=1500.0, down_init=full_state_of(st12)
    )
    ref_below = {p: n for p, n in zip(down_ref.p1, down_ref.n_ct_avg) if p < 10.0}
    ok = clause_up and clause_down and clause_meet
    return CriterionResult(
        8, "hysteresis sweep", ok,
        f"up below threshold {dict((p, float(f'{n:.2e}')) for p, n in up_below.items())}; "
        f"down below threshold {dict((p, float(f'{n:.2e}')) for p, n in down_below.items())}; "
        f"N_cT at P1=12: up {up12:.4f} vs down {down12:.4f}; "
        f"self-trapped-branch reference down sweep {dict((p, float(f'{n:.2e}')) for p, n in ref_below.items())}",
    )


def criterion_9() -> CriterionResult:
    """Critical-current boundary coincides with the balanced-state breakdown.

    Both tests must flip between J = gamma2/2 (1 - 1e-9) and
    J = gamma2/2 (1 + 1e-9): same boundary to a part in a billion.  The
    exact-equality point is not probed (the two checks reach the boundary
    through different float paths and a single point there is ill-posed).
    """
    ok = True
    report = []
    for g2 in (0.05, 0.1, 0.2):
        verdicts = {}
        for tag, j in (("below", 0.5 * g2 * (1.0 - 1e-9)),
                       ("above", 0.5 * g2 * (1.0 + 1e-9))):
            params = replace(_baseline(), gamma2=g2, j_coupling=j)
            n_pt = params.pt_reservoir_level
            cc_broken = critical_current_check(params, n_pt) == BROKEN
            try:
                pt_symmetric_states(params, 2.0 * params.gamma_r1 * n_pt)
                pt_broken = False
            except PtBroken:
                pt_broken = True
            verdicts[tag] = (cc_broken, pt_broken)
            ok = ok and (cc_broken == pt_broken)
        # the flip must actually happen inside the bracket, for both checks
        ok = ok and verdicts["below"] == (True, True) and verdicts["above"] == (False, False)
        report.append(f"g2={g2}: below={verdicts['below']}, above={verdicts['above']}")
    return CriterionResult(9, "critical-current correspondence", ok, "; ".join(report))


def criterion_10() -> CriterionResult:
    """Emitter counts and the dominance of the self-trapped line."""
    params = _baseline()
    near = stable_states_for_emission(params, 11.0)
    high = stable_states_for_emission(replace(params, detuning_override=1.0), 50.0)
    trapped = [s for s in near if s.branch == SELF_TRAPPED]
    ok = len(near) == 3 and len(high) == 2 and len(trapped) == 1
    details = f"stable emitters: P1=11 -> {len(near)}, P1=50/det=1 -> {len(high)}"
    if ok:
        st = trapped[0]
        weights = {s.branch: line_weight(s, -5.0, 5.0, 2.5) for s in near}
        max_w = max(weights.values())
        max_omega = max(s.omega for s in near)
        ok = weights[SELF_TRAPPED] == max_w and st.omega == max_omega
        details += f"; line weights {dict((k, round(v, 3)) for k, v in weights.items())}"
        details += f"; self-trapped energy {st.omega:.4f} vs max {max_omega:.4f}"
    return CriterionResult(10, "emission state counts", ok, details)


def criterion_11() -> CriterionResult:
    """Closed two-mode limit: conserved total and the plasma frequency."""
    params = ModelParams(
        gamma1=0.0, gamma2=0.0, gamma_r1=0.0, r1_prime=0.0, pump_p1=0.0
    )
    n_ct0 = 10.0
    init = full_from_reduced(
        ReducedState(zeta=1e-3, delta_phi=0.0, n_ct=n_ct0, n_r1=0.0)
    )
    traj = evolve(params, init, 1000.0, sample_dt=0.25)
    drift = float(np.max(np.abs(traj.n_ct - traj.n_ct[0])))
    # windowed DFT peak, refined by golden-section on the spectral magnitude
    sig = (traj.zeta - np.mean(traj.zeta)) * np.hanning(len(traj.zeta))
    dt = traj.times[1] - traj.times[0]
    spectrum = np.abs(np.fft.rfft(sig))
    freqs = np.fft.rfftfreq(len(sig), d=dt) * 2.0 * math.pi
    k = int(np.argmax(spectrum))

    def mag(w):
        return abs(np.sum(sig * np.exp(-1j * w * traj.times)))

    a, b = freqs[k - 1], freqs[k + 1]
    gr = 0.5 * (math.sqrt(5.0) - 1.0)
    c, d = b - gr * (b - a), a + gr * (b - a)
    for _ in range(120):
        if mag(c) > mag(d):
            b, d = d, c
            c = b - gr * (b - a)
        else:
            a, c = c, d
            d = a + gr * (b - a)
    w_meas = 0.5 * (a + b)
    w_expect = math.sqrt(
        2.0 * params.j_coupling * params.u_mean * n_ct0 + 4.0 * params.j_coupling**2
    )
    rel = abs(w_meas - w_expect) / w_expect
    ok = drift <= 1e-9 and rel <= 1e-4
    return CriterionResult(
        11, "conservative-limit regression", ok,
        f"N_cT drift {drift:.3e} (tol 1e-9); frequency {w_meas:.9f} vs "
        f"{w_expect:.9f}, rel {rel:.3e} (tol 1e-4)",
    )


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run(ids=None) -> list[CriterionResult]:
    """Run the requested criteria (all by default) in numeric order."""
    if ids is None:
        ids = sorted(CRITERIA)
    return [CRITERIA[i]() for i in ids]
