import math
from dataclasses import replace

import numpy as np
import pytest

from polariton_bjj import (
    ChartSingularity,
    ModelParams,
    NotAFixedPoint,
    ReducedState,
    all_states_at_pumping,
    classify,
    jacobian,
    non_condensed_spectrum,
    reduced_rhs,
    reduced_velocity,
)
from polariton_bjj.model import full_from_reduced
from polariton_bjj.stationary import (
    NON_CONDENSED,
    PT_ANTIBONDING,
    PT_BONDING,
    SELF_TRAPPED,
    UNTRAPPED,
)

BASE = ModelParams()
CONSERVATIVE = ModelParams(gamma1=0.0, gamma2=0.0, gamma_r1=0.0, r1_prime=0.0)


def test_balanced_fixed_point_has_zero_reduced_velocity():
    params = replace(BASE, pump_p1=11.0)
    s = ReducedState(zeta=0.0, delta_phi=math.asin(0.5), n_ct=10.0, n_r1=20.0)
    d = reduced_rhs(params, s)
    assert max(abs(x) for x in d) < 1e-10


def test_uncoupled_imbalance_drive():
    params = replace(BASE, j_coupling=0.0, pump_p1=0.0)
    s = ReducedState(zeta=0.0, delta_phi=0.0, n_ct=4.0, n_r1=30.0)
    d = reduced_rhs(params, s)
    v12 = 0.5 * (params.r1_prime * 30.0 - params.gamma1) + 0.5 * params.gamma2
    assert d.dzeta == pytest.approx(v12, abs=1e-15)


def test_conservative_limit_freezes_total_number():
    s = ReducedState(zeta=0.3, delta_phi=1.0, n_ct=12.0, n_r1=0.0)
    d = reduced_rhs(CONSERVATIVE, s)
    assert d.dn_ct == 0.0 and d.dn_r1 == 0.0


def test_chart_singularity_raised():
    with pytest.raises(ChartSingularity):
        reduced_rhs(BASE, ReducedState(zeta=1.0 - 1e-13, delta_phi=0.0, n_ct=1.0, n_r1=0.0))


def test_radiative_coupling_rejected():
    with pytest.raises(ValueError):
        reduced_rhs(replace(BASE, radiative_gamma=0.01),
                    ReducedState(zeta=0.0, delta_phi=0.0, n_ct=1.0, n_r1=0.0))


def test_chain_rule_oracle():
    # the reduced flow must equal the full flow pushed through the change
    # of variables; this pins every sign and coefficient at once
    rng = np.random.default_rng(17)
    params = replace(BASE, pump_p1=11.0)
    for _ in range(50):
        s = ReducedState(
            zeta=rng.uniform(-0.95, 0.95),
            delta_phi=rng.uniform(-math.pi, math.pi),
            n_ct=rng.uniform(0.1, 40.0),
            n_r1=rng.uniform(0.0, 40.0),
        )
        via_full = reduced_velocity(params, full_from_reduced(s))
        assert np.allclose(via_full, np.array(reduced_rhs(params, s)), atol=1e-8)


def test_jacobian_conservative_plasma_frequency():
    n_ct = 10.0
    jac, low = jacobian(CONSERVATIVE, ReducedState(zeta=0.0, delta_phi=0.0, n_ct=n_ct, n_r1=0.0))
    assert not low
    eigs = np.sort_complex(np.linalg.eigvals(jac))
    omega = math.sqrt(2.0 * CONSERVATIVE.j_coupling * CONSERVATIVE.u_mean * n_ct
                      + 4.0 * CONSERVATIVE.j_coupling ** 2)
    assert np.allclose(sorted(eigs.real), [0.0] * 4, atol=1e-6)
    assert np.allclose(sorted(eigs.imag), [-omega, 0.0, 0.0, omega], atol=1e-6)


def test_jacobian_reservoir_diagonal():
    s = ReducedState(zeta=0.2, delta_phi=0.7, n_ct=15.0, n_r1=12.0)
    jac, _ = jacobian(BASE, s)
    expected = -BASE.gamma_r1 - BASE.r1_prime * s.n_ct * 0.5 * (1.0 + s.zeta)
    assert jac[3, 3] == pytest.approx(expected, rel=1e-6)


def test_verdict_pattern_at_baseline():
    expected = {
        NON_CONDENSED: False,
        PT_BONDING: True,
        PT_ANTIBONDING: True,
        SELF_TRAPPED: True,
        UNTRAPPED: False,
    }
    for st in all_states_at_pumping(BASE, 11.0):
        assert classify(BASE, st).stable is expected[st.branch]


def test_antibonding_destabilizes_at_high_pumping():
    verdicts = {}
    for p1 in (11.0, 20.0):
        st = [s for s in all_states_at_pumping(BASE, p1) if s.branch == PT_ANTIBONDING][0]
        verdicts[p1] = classify(BASE, st).stable
    assert verdicts == {11.0: True, 20.0: False}


def test_bonding_stays_stable_up_to_high_pumping():
    from polariton_bjj import pt_symmetric_states

    for p1 in (10.2, 15.0, 25.0, 40.0, 50.0):
        st = pt_symmetric_states(BASE, p1)[0]
        assert classify(BASE, st).stable, f"bonding state unstable at P1={p1}"


def test_eigenvalues_close_under_conjugation_and_match_companion_roots():
    for st in all_states_at_pumping(BASE, 11.0):
        if st.branch == NON_CONDENSED:
            continue
        verdict = classify(BASE, st)
        eigs = np.array(verdict.eigenvalues)
        # conjugation closure
        for lam in eigs:
            assert np.min(np.abs(eigs - lam.conjugate())) < 1e-9
        # companion-matrix cross-check of the eigensolver
        from polariton_bjj.model import reduced_from_full
        from polariton_bjj.stationary import full_state_of

        jac, _ = jacobian(replace(BASE, pump_p1=st.p1),
                          reduced_from_full(full_state_of(st)))
        roots = np.roots(np.poly(jac))
        for lam in eigs:
            assert np.min(np.abs(roots - lam)) < 1e-9


def test_non_condensed_delegates_to_fluctuation_spectrum():
    st = [s for s in all_states_at_pumping(BASE, 11.0) if s.branch == NON_CONDENSED][0]
    verdict = classify(BASE, st)
    spec = non_condensed_spectrum(replace(BASE, pump_p1=11.0), st.n_r1)
    assert verdict.max_growth == pytest.approx(spec.max_growth, abs=1e-15)
    assert not verdict.stable


def test_classify_rejects_non_fixed_points():
    st = [s for s in all_states_at_pumping(BASE, 11.0) if s.branch == SELF_TRAPPED][0]
    from dataclasses import replace as dreplace

    with pytest.raises(NotAFixedPoint):
        classify(BASE, dreplace(st, n_c1=st.n_c1 * 1.5))
