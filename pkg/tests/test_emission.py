import math
from dataclasses import replace

import numpy as np
import pytest

from polariton_bjj import (
    EmissionMap,
    GridTooSmall,
    ModelParams,
    StationaryState,
    emission_map,
    line_weight,
    stable_states_for_emission,
)
from polariton_bjj.stationary import PT_ANTIBONDING, PT_BONDING, SELF_TRAPPED

BASE = ModelParams()


def _state(n_c1, n_c2, omega, delta_phi, branch=SELF_TRAPPED):
    n_ct = n_c1 + n_c2
    return StationaryState(
        branch=branch, omega=omega, n_c1=n_c1, n_c2=n_c2, n_r1=20.0,
        delta_phi=delta_phi, p1=11.0, zeta=(n_c1 - n_c2) / n_ct if n_ct else 0.0,
    )


def test_three_lines_near_threshold_with_trapped_dominant():
    states = stable_states_for_emission(BASE, 11.0)
    assert sorted(s.branch for s in states) == sorted(
        [PT_BONDING, PT_ANTIBONDING, SELF_TRAPPED]
    )
    weights = {s.branch: line_weight(s, -5.0, 5.0, 2.5) for s in states}
    omegas = {s.branch: s.omega for s in states}
    assert max(weights, key=weights.get) == SELF_TRAPPED
    assert max(omegas, key=omegas.get) == SELF_TRAPPED
    em = emission_map(states)
    assert np.all(em.intensity >= 0.0)


def test_two_lines_at_high_pumping_with_detuning():
    states = stable_states_for_emission(replace(BASE, detuning_override=1.0), 50.0)
    assert len(states) == 2
    assert {s.branch for s in states} == {PT_BONDING, SELF_TRAPPED}


def test_no_emitters_below_the_fold():
    assert stable_states_for_emission(BASE, 8.0) == []


def test_antisymmetric_mode_has_node_between_pillars():
    st = _state(5.0, 5.0, 0.1, math.pi)
    x = np.arange(-12.0, 12.0 + 1e-9, 0.05)
    em = emission_map([st], x_grid=x)
    profile = em.intensity[:, np.argmin(np.abs(em.omega_grid - st.omega))]
    i0 = int(np.argmin(np.abs(x)))
    assert profile[i0] < profile[i0 - 40] and profile[i0] < profile[i0 + 40]
    # the symmetric combination peaks there instead
    em_sym = emission_map([_state(5.0, 5.0, 0.1, 0.0)], x_grid=x)
    sym = em_sym.intensity[:, np.argmin(np.abs(em_sym.omega_grid - st.omega))]
    assert sym[i0] > profile[i0]


def test_mirror_symmetry():
    states = [
        _state(7.0, 2.0, 0.3, 2.8),
        _state(1.0, 4.0, -0.1, 0.4, branch=PT_BONDING),
    ]
    mirrored = [
        _state(2.0, 7.0, 0.3, -2.8),
        _state(4.0, 1.0, -0.1, -0.4, branch=PT_BONDING),
    ]
    x = np.linspace(-15.0, 15.0, 301)
    direct = emission_map(states, x_grid=x)
    flipped = emission_map(mirrored, x_grid=x)
    assert np.allclose(direct.intensity, flipped.intensity[::-1, :], atol=1e-12)


def test_intensity_scales_linearly_with_population():
    st = _state(6.0, 3.0, 0.2, 2.5)
    double = _state(12.0, 6.0, 0.2, 2.5)
    a = emission_map([st])
    b = emission_map([double])
    assert np.allclose(b.intensity, 2.0 * a.intensity, rtol=1e-12)


def test_map_integral_matches_line_weights():
    # quadrature on wide fine grids reproduces the analytic total emission,
    # including the pillar-interference cross term
    states = [
        _state(9.0, 4.0, 0.15, 2.9),
        _state(2.0, 2.0, -0.05, 0.5, branch=PT_BONDING),
    ]
    x = np.arange(-25.0, 25.0 + 1e-9, 0.05)
    omega = np.arange(-0.3, 0.4 + 1e-9, 0.001)
    em = emission_map(states, x_grid=x, omega_grid=omega)
    expected = sum(line_weight(s, -5.0, 5.0, 2.5) for s in states)
    assert em.integrated() == pytest.approx(expected, rel=1e-6)


def test_clipped_spectral_support_is_rejected():
    st = _state(5.0, 5.0, 0.5, 0.1)
    with pytest.raises(GridTooSmall):
        emission_map([st], omega_grid=np.linspace(-0.1, 0.5, 101))
    with pytest.raises(ValueError):
        emission_map([])
