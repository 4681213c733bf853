import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from ionscatter.budget_single import (
    BLUE_INSIDE,
    BLUE_OUTSIDE,
    RED_INSIDE,
    RED_OUTSIDE,
    ErrorBudget,
    SingleQubitGateSpec,
    detunings_for_raman_error,
    epsilon_d_asymptotic_single,
    epsilon_d_single,
    epsilon_ratio_d_over_s,
    epsilon_s_single,
    power_for_error_single,
    red_outside_detuning,
    single_budget,
    solve_raman_detunings,
)
from ionscatter.scattering import (
    BeamConfig,
    g_squared_from_beam,
    pi_time,
    prob_raman_pi,
    rabi_frequency,
    rate_raman,
    raman_inside_minimum,
)
from ionscatter.species import NoDLevelError

from reference_tables import POWER, RABI, SPECIES, WAIST

TWO_PI = 2 * math.pi


def spec(power=POWER, waist=WAIST, rabi=RABI):
    return SingleQubitGateSpec(rabi=rabi, beam=BeamConfig(power=power, waist=waist))


def test_epsilon_s_matches_rate_route(registry):
    # solve for the detuning giving RABI at POWER, then Gamma_Raman * tau_pi
    for s in registry.values():
        g2 = g_squared_from_beam(s, BeamConfig(POWER, WAIST))
        d = brentq(lambda x: rabi_frequency(g2, s, x * s.omega_f) - RABI, -1e9, -1e-6, xtol=1e-300, rtol=1e-15)
        d *= s.omega_f
        via_rates = rate_raman(g2, s, d) * pi_time(RABI)
        assert epsilon_s_single(s, spec()) == pytest.approx(via_rates, rel=1e-9)
        assert epsilon_s_single(s, spec()) == pytest.approx(prob_raman_pi(s, d), rel=1e-9)


def test_epsilon_s_scaling(be):
    base = epsilon_s_single(be, spec())
    assert epsilon_s_single(be, spec(power=2 * POWER)) == pytest.approx(base / 2, rel=1e-14)
    assert epsilon_s_single(be, spec(waist=2 * WAIST)) == pytest.approx(4 * base, rel=1e-14)
    assert epsilon_s_single(be, spec(rabi=2 * RABI)) == pytest.approx(2 * base, rel=1e-14)


def test_power_inverts_epsilon(registry):
    for s in registry.values():
        p0 = power_for_error_single(s, RABI, WAIST, 1e-4)
        assert epsilon_s_single(s, spec(power=p0)) == pytest.approx(1e-4, rel=1e-12)
        # error scales as 1/P, so P0 / 10 mW equals eps_S / 1e-4
        assert p0 / POWER == pytest.approx(epsilon_s_single(s, spec()) / 1e-4, rel=1e-12)


def test_power_target_validated(be):
    for bad in (0.0, 1.0, -1e-4):
        with pytest.raises(ValueError):
            power_for_error_single(be, RABI, WAIST, bad)


def test_spec_validation():
    with pytest.raises(ValueError):
        spec(rabi=0.0)


def test_error_budget_range():
    ErrorBudget(detuning=-1.0, power=1e-3, epsilon_s=1e-4)
    with pytest.raises(ValueError):
        ErrorBudget(detuning=-1.0, power=1e-3, epsilon_s=1.5)
    with pytest.raises(ValueError):
        ErrorBudget(detuning=-1.0, power=1e-3, epsilon_d=-1e-9)


def test_beryllium_reference_detuning(be):
    d = red_outside_detuning(detunings_for_raman_error(be, 1e-4))
    assert d / TWO_PI == pytest.approx(-203e9, rel=0.01)


def brute_roots(omega_f, scale, target):
    # units of omega_f; scale is passed already divided by omega_f
    f = lambda x: scale / abs(x * (x - 1.0)) - target
    grid = np.concatenate(
        [-np.geomspace(1e9, 1e-9, 4000), np.geomspace(1e-9, 0.5, 4000), 1 - np.geomspace(0.5, 1e-9, 4000)[1:], 1 + np.geomspace(1e-9, 1e9, 4000)]
    )
    vals = np.array([f(x) for x in grid])
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa * fb < 0 and not (a < 0 < b) and not (a < 1 < b):
            roots.append(brentq(f, a, b, xtol=1e-300, rtol=1e-15) * omega_f)
    return roots


@pytest.mark.parametrize("target", [1e-6, 1e-4, 5e-3, 0.05])
def test_solver_agrees_with_bracketing(registry, target):
    for s in registry.values():
        scale = 2 * math.pi * s.gamma / 3
        ours = [r.detuning for r in detunings_for_raman_error(s, target)]
        ref = brute_roots(s.omega_f, scale / s.omega_f, target)
        assert len(ours) == len(ref)
        np.testing.assert_allclose(ours, ref, rtol=1e-9)


def test_branch_labels(be):
    target = 10 * raman_inside_minimum(be)
    roots = detunings_for_raman_error(be, target)
    assert [r.branch for r in roots] == [RED_OUTSIDE, RED_INSIDE, BLUE_INSIDE, BLUE_OUTSIDE]
    wf = be.omega_f
    d = [r.detuning for r in roots]
    assert d[0] < 0 < d[1] < wf / 2 < d[2] < wf < d[3]


def test_root_count_threshold(registry):
    for s in registry.values():
        m = raman_inside_minimum(s)
        assert len(detunings_for_raman_error(s, m * (1 - 1e-6))) == 2
        assert len(detunings_for_raman_error(s, m * (1 + 1e-6))) == 4


@settings(max_examples=300, deadline=None)
@given(which=st.sampled_from(SPECIES), log_target=st.floats(-8.0, -0.5))
def test_solver_round_trip(registry, which, log_target):
    s = registry[which]
    target = 10.0**log_target
    roots = detunings_for_raman_error(s, target)
    assert len(roots) == (4 if target > raman_inside_minimum(s) else 2)
    for r in roots:
        assert prob_raman_pi(s, r.detuning) == pytest.approx(target, rel=1e-9)


def test_solver_rejects_nonpositive():
    with pytest.raises(ValueError):
        solve_raman_detunings(1.0, 1.0, 0.0)


def test_far_detuned_root_is_stable():
    # tiny targets push the outer roots far out; no cancellation
    roots = solve_raman_detunings(1.0, 1.0, 1e-30)
    d = roots[0].detuning
    assert 1.0 / abs(d * (d - 1.0)) == pytest.approx(1e-30, rel=1e-12)


def test_d_level_errors(ca):
    d = -TWO_PI * 442e9
    f = 1 / 17
    ratio = epsilon_d_single(ca, d) / prob_raman_pi(ca, d)
    assert epsilon_ratio_d_over_s(ca, d) == pytest.approx(ratio, rel=1e-12)
    assert epsilon_d_asymptotic_single(ca) == pytest.approx(3 * math.pi * ca.gamma * f / ca.omega_f, rel=1e-14)
    assert epsilon_d_single(ca, -1e7 * ca.omega_f) == pytest.approx(epsilon_d_asymptotic_single(ca), rel=1e-6)


@settings(max_examples=100, deadline=None)
@given(which=st.sampled_from(["43Ca+", "87Sr+", "137Ba+", "171Yb+", "199Hg+"]), x=st.floats(-100.0, -1e-3))
def test_ratio_identity(registry, which, x):
    s = registry[which]
    d = x * s.omega_f
    assert epsilon_ratio_d_over_s(s, d) == pytest.approx(
        epsilon_d_single(s, d) / prob_raman_pi(s, d), rel=1e-12
    )


def test_missing_d_level_raises(be):
    with pytest.raises(NoDLevelError):
        epsilon_d_single(be, -be.omega_f)
    with pytest.raises(NoDLevelError):
        epsilon_ratio_d_over_s(be, -be.omega_f)
    with pytest.raises(NoDLevelError):
        epsilon_d_asymptotic_single(be)


def test_single_budget(be, ca):
    d = -TWO_PI * 203e9
    b = single_budget(be, SingleQubitGateSpec(RABI, BeamConfig(POWER, WAIST, d)))
    assert b.epsilon_d is None
    assert b.epsilon_s == pytest.approx(epsilon_s_single(be, spec()))
    b = single_budget(ca, SingleQubitGateSpec(RABI, BeamConfig(POWER, WAIST, d)))
    assert b.epsilon_d == pytest.approx(epsilon_d_single(ca, d))
    with pytest.raises(ValueError):
        single_budget(be, spec())
