import math
from dataclasses import replace

import numpy as np
import pytest

from polariton_bjj import (
    FullState,
    ModelParams,
    non_condensed_spectrum,
    onsite_energies,
    threshold_pumping,
    threshold_vs_coupling,
)


def analytic_threshold(params):
    """Zero-detuning threshold in closed form (independent oracle).

    Below the exceptional point the growth of the hybridized modes vanishes
    when the gain-loss product matches J^2; beyond it the threshold
    saturates at the full gain-loss balance.
    """
    g1, g2, j = params.gamma1, params.gamma2, params.j_coupling
    r_th = g1 + min(4.0 * j * j / g2, g2)
    n_th = r_th / params.r1_prime
    return params.gamma_r1 * n_th, n_th


def brute_force_threshold(params, n_points=2_000_001):
    """Dense-grid scan for the first non-negative growth rate."""
    lo = params.gamma1 / params.r1_prime
    hi = (params.gamma1 + params.gamma2) / params.r1_prime
    for n in np.linspace(lo, hi, n_points):
        if non_condensed_spectrum(params, float(n)).max_growth >= 0.0:
            return params.gamma_r1 * float(n)
    return None


def test_uncoupled_spectrum_at_partial_gain():
    spec = non_condensed_spectrum(replace(ModelParams(), j_coupling=0.0), 10.0)
    assert spec.omega_plus.imag == pytest.approx(0.0, abs=1e-15)
    assert spec.omega_minus.imag == pytest.approx(-0.05, abs=1e-15)


def test_real_modes_at_full_balance():
    spec = non_condensed_spectrum(ModelParams(), 20.0)
    split = math.sqrt(0.03) / 2.0
    assert spec.omega_plus == pytest.approx(split, abs=1e-15)
    assert spec.omega_minus == pytest.approx(-split, abs=1e-15)


def test_unpumped_decay_modes():
    spec = non_condensed_spectrum(
        replace(ModelParams(), j_coupling=0.0, gamma1=0.08, gamma2=0.12), 0.0
    )
    imags = sorted([spec.omega_plus.imag, spec.omega_minus.imag])
    assert imags == pytest.approx([-0.06, -0.04], abs=1e-15)


def test_mode_sum_matches_trace():
    rng = np.random.default_rng(3)
    for _ in range(30):
        params = replace(
            ModelParams(),
            j_coupling=rng.uniform(0.0, 0.5),
            detuning_override=rng.uniform(-1.0, 1.0),
            gamma2=rng.uniform(0.01, 0.3),
        )
        n_r1 = rng.uniform(0.0, 60.0)
        spec = non_condensed_spectrum(params, n_r1)
        en = onsite_energies(params, FullState(0j, 0j, n_r1))
        assert spec.omega_plus + spec.omega_minus == pytest.approx(en.e1 + en.e2, abs=1e-12)
        # deterministic branch ordering
        key = (spec.omega_plus.real, spec.omega_plus.imag)
        assert key >= (spec.omega_minus.real, spec.omega_minus.imag)


def test_threshold_single_mode_limit():
    res = threshold_pumping(replace(ModelParams(), j_coupling=0.0))
    assert res.n_r_th == pytest.approx(10.0, abs=1e-9)
    assert res.p_th == pytest.approx(5.0, abs=1e-9)


def test_threshold_saturates_beyond_exceptional_point():
    for j in (0.05, 0.1, 0.3, 1.0):
        res = threshold_pumping(replace(ModelParams(), j_coupling=j))
        assert res.p_th == pytest.approx(10.0, abs=1e-9)


def test_threshold_against_closed_form():
    for j in (0.01, 0.02, 0.03, 0.04, 0.045):
        params = replace(ModelParams(), j_coupling=j)
        expected, _ = analytic_threshold(params)
        assert threshold_pumping(params).p_th == pytest.approx(expected, rel=1e-9)


def test_threshold_against_brute_force_scan():
    params = replace(ModelParams(), j_coupling=0.03)
    fine = threshold_pumping(params).p_th
    coarse = brute_force_threshold(params)
    # the scan's resolution bounds the disagreement
    assert coarse is not None
    assert abs(coarse - fine) < 5.0 * (5.0 / 2_000_000)


def test_threshold_monotone_in_coupling():
    table = threshold_vs_coupling(ModelParams(), [0.0, 0.01, 0.02, 0.04, 0.06, 0.1])
    p_ths = [res.p_th for _, res in table]
    assert p_ths == sorted(p_ths)
    assert p_ths[0] == pytest.approx(5.0, abs=1e-9)


def test_saturation_bound():
    rng = np.random.default_rng(5)
    params = ModelParams()
    bound = params.gamma_r1 * (params.gamma1 + params.gamma2) / params.r1_prime
    for _ in range(20):
        p = replace(params, j_coupling=rng.uniform(0.0, 2.0),
                    detuning_override=rng.uniform(-2.0, 2.0))
        assert threshold_pumping(p).p_th <= bound + 1e-9


def test_detuning_pulls_threshold_toward_single_mode():
    base = threshold_pumping(ModelParams()).p_th
    detuned = threshold_pumping(replace(ModelParams(), detuning_override=1.0)).p_th
    assert abs(detuned - 5.0) < abs(base - 5.0)
    # pointwise below the zero-detuning curve
    for j in (0.02, 0.05, 0.1):
        p0 = threshold_pumping(replace(ModelParams(), j_coupling=j)).p_th
        p1 = threshold_pumping(
            replace(ModelParams(), j_coupling=j, detuning_override=1.0)
        ).p_th
        assert p1 <= p0 + 1e-12


def test_threshold_mode_pair_is_real_at_crossing():
    # at the saturated threshold both fluctuation modes are purely real
    params = ModelParams()
    res = threshold_pumping(params)
    spec = non_condensed_spectrum(params, res.n_r_th)
    assert abs(spec.omega_plus.imag) < 1e-10
    assert abs(spec.omega_minus.imag) < 1e-10
    assert abs(spec.omega_plus.real) > 0.05


def test_threshold_vs_coupling_rejects_bad_grid():
    with pytest.raises(ValueError):
        threshold_vs_coupling(ModelParams(), [])
    with pytest.raises(ValueError):
        threshold_vs_coupling(ModelParams(), [-0.1])
