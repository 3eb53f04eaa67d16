import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from causalwalk.engine import (
    MINUS,
    PLUS,
    PeriodicWalkSpec,
    SwitchSpec,
    activation_trajectory,
    binomial_commuting_expand,
    effective_activation_apply,
    evolve_definite,
    expand_switched_step,
    full_activation_apply,
    full_activation_trajectory,
    periodic_sequence,
    project_switch,
    switch_extended_evolve,
    switched_step_evolve,
    switched_step_operator,
    switched_step_subsets,
)
from causalwalk.errors import (
    BudgetError,
    DegeneratePostselectionError,
    LightConeError,
    SpecError,
    WrongRegimeError,
)
from causalwalk.observables import state_spread
from causalwalk.oracle import brute_force_operator, enumerate_step_sequences, sum_terms
from causalwalk.walker import CoinSpec, make_localized_state

PI = math.pi
SQ = 1 / math.sqrt(2)
T1, T2 = PI / 4, PI / 6
angles = st.floats(-PI, PI, allow_nan=False)


def psi0(N, coin=(SQ, SQ)):
    return make_localized_state(coin[0], coin[1], 0, 2 * N + 3)


def thetas_of(spec):
    return [c.theta for c in periodic_sequence(spec)]


def fidelity(a, b):
    va, vb = a.to_vector(), b.to_vector()
    return abs(np.vdot(va, vb)) ** 2 / (np.vdot(va, va).real * np.vdot(vb, vb).real)


# -- periodic_sequence --------------------------------------------------------


def test_two_period_forward_odd():
    assert thetas_of(PeriodicWalkSpec((T1, T2), 5)) == [T2, T1, T2, T1, T2]


def test_two_period_reverse():
    assert thetas_of(PeriodicWalkSpec((T1, T2), 4, "reverse")) == [T1, T2, T1, T2]


def test_single_coin():
    assert thetas_of(PeriodicWalkSpec((0.3,), 3)) == [0.3, 0.3, 0.3]


def test_three_period_blocks_and_tail():
    a, b, c = 0.1, 0.2, 0.3
    assert thetas_of(PeriodicWalkSpec((a, b, c), 5)) == [a, b, c, a, b]
    assert thetas_of(PeriodicWalkSpec((a, b, c), 5, "reverse")) == [c, b, a, c, b]


def test_mirror_is_time_reversal():
    spec = PeriodicWalkSpec((0.1, 0.2, 0.3), 7)
    assert thetas_of(PeriodicWalkSpec(spec.thetas, 7, "mirror")) == thetas_of(spec)[::-1]


def test_explicit_permutation():
    assert thetas_of(PeriodicWalkSpec((0.1, 0.2, 0.3), 4, (2, 3, 1))) == [0.2, 0.3, 0.1, 0.2]


@pytest.mark.parametrize("kwargs", [dict(thetas=()), dict(thetas=(0.1,), order=(1, 2)), dict(thetas=(0.1,), order="sideways")])
def test_bad_specs(kwargs):
    with pytest.raises(SpecError):
        PeriodicWalkSpec(steps=3, **kwargs)


# -- evolve_definite ------------------------------------------------------------


def test_zero_steps():
    traj = evolve_definite(psi0(0), PeriodicWalkSpec((T1, T2), 0))
    assert len(traj) == 1
    np.testing.assert_array_equal(traj.states[0].amplitudes, psi0(0).amplitudes)


def test_degenerate_period():
    a = evolve_definite(psi0(10), PeriodicWalkSpec((T1, T1), 10))
    b = evolve_definite(psi0(10), PeriodicWalkSpec((T1,), 10))
    for x, y in zip(a.states, b.states):
        np.testing.assert_allclose(x.amplitudes, y.amplitudes, atol=1e-15)


def test_two_period_spread_matches_oracle():
    N = 100
    spec = PeriodicWalkSpec((T1, T2), N)
    traj = evolve_definite(psi0(N), spec)
    vec = brute_force_operator(periodic_sequence(spec), 2 * N + 3) @ psi0(N).to_vector()
    L = 2 * N + 3
    p = np.sum(np.abs(vec.reshape(2, L)) ** 2, axis=0)
    x = np.arange(L) - (L - 1) // 2
    sigma = math.sqrt(np.dot(p, x**2) - np.dot(p, x) ** 2)
    assert state_spread(traj.final) == pytest.approx(sigma, abs=1e-10)
    assert all(n == pytest.approx(1.0, abs=1e-12) for n in traj.norms)


def test_light_cone_error():
    with pytest.raises(LightConeError):
        evolve_definite(make_localized_state(1, 0, 0, 9), PeriodicWalkSpec((T1,), 4))
    evolve_definite(make_localized_state(1, 0, 0, 9), PeriodicWalkSpec((T1,), 4), allow_wrap=True)


# -- switch-extended evolution and projection -------------------------------------


def specs(N, thetas=(T1, T2)):
    fwd = PeriodicWalkSpec(thetas, N)
    return fwd, fwd.reversed()


def test_switch_theta_zero_is_forward():
    fwd, rev = specs(6)
    sw = switch_extended_evolve(psi0(6), fwd, rev, SwitchSpec(0.0))
    np.testing.assert_allclose(sw.branch(0).amplitudes, evolve_definite(psi0(6), fwd).final.amplitudes, atol=1e-15)
    assert np.max(np.abs(sw.amplitudes[1])) == 0


def test_switch_theta_half_pi_is_reverse():
    fwd, rev = specs(6)
    sw = switch_extended_evolve(psi0(6), fwd, rev, SwitchSpec(PI / 2))
    np.testing.assert_allclose(sw.branch(1).amplitudes, evolve_definite(psi0(6), rev).final.amplitudes, atol=1e-15)
    assert np.max(np.abs(sw.amplitudes[0])) < 1e-16


def test_idle_control_factorizes():
    fwd, _ = specs(6)
    sw = switch_extended_evolve(psi0(6), fwd, fwd, SwitchSpec())
    definite = evolve_definite(psi0(6), fwd).final
    for outcome in (PLUS, (1, 0)):
        state, _ = project_switch(sw, outcome)
        np.testing.assert_allclose(state.amplitudes, definite.amplitudes, atol=1e-14)
    _, prob = project_switch(sw, PLUS)
    assert prob == pytest.approx(1.0, abs=1e-12)


def test_computational_projection():
    fwd, rev = specs(6)
    sw = switch_extended_evolve(psi0(6), fwd, rev, SwitchSpec())
    state, prob = project_switch(sw, (1, 0))
    assert prob == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(state.amplitudes, evolve_definite(psi0(6), fwd).final.amplitudes, atol=1e-14)


def test_plus_projection_matches_effective_operator():
    fwd, rev = specs(2)
    state, _ = project_switch(switch_extended_evolve(psi0(2), fwd, rev, SwitchSpec()), PLUS)
    raw, norm = effective_activation_apply(psi0(2), fwd, rev, PI / 4)
    np.testing.assert_allclose(state.amplitudes, raw.amplitudes / norm, atol=1e-12)
    L = 7
    u1 = brute_force_operator(periodic_sequence(fwd), L)
    u2 = brute_force_operator(periodic_sequence(rev), L)
    target = (u1 + u2) @ psi0(2).to_vector() / 2
    np.testing.assert_allclose(state.to_vector(), target / np.linalg.norm(target), atol=1e-12)


def test_zero_probability_outcome():
    fwd, rev = specs(4)
    sw = switch_extended_evolve(psi0(4), fwd, rev, SwitchSpec(0.0))
    with pytest.raises(DegeneratePostselectionError):
        project_switch(sw, (0, 1))


def test_mismatched_steps():
    with pytest.raises(SpecError):
        switch_extended_evolve(psi0(6), PeriodicWalkSpec((T1, T2), 6), PeriodicWalkSpec((T1, T2), 4), SwitchSpec())


def test_bad_postselect_vector():
    with pytest.raises(SpecError):
        SwitchSpec(postselect=(1, 1))


@given(angles, angles, angles, st.integers(0, 20))
def test_postselection_consistency(t1, t2, ts, N):
    fwd, rev = specs(N, (t1, t2))
    sw = switch_extended_evolve(psi0(N), fwd, rev, SwitchSpec(ts))
    try:
        state, p_plus = project_switch(sw, PLUS)
        raw, _ = effective_activation_apply(psi0(N), fwd, rev, ts)
    except (DegeneratePostselectionError, ArithmeticError):
        return
    _, p_minus = project_switch(sw, MINUS) if p_plus < 1 - 1e-12 else (None, 0.0)
    assert p_plus + p_minus == pytest.approx(1.0, abs=1e-12)
    assert fidelity(state, raw) > 1 - 1e-12
    assert sw.norm == pytest.approx(1.0, abs=1e-12)


def test_activation_trajectory_reduces_to_definite():
    fwd, rev = specs(8)
    for ts, spec in ((0.0, fwd), (PI / 2, rev)):
        traj = activation_trajectory(psi0(8), fwd, rev, SwitchSpec(ts, (1, 0) if ts == 0 else (0, 1)))
        for a, b in zip(traj.states, evolve_definite(psi0(8), spec).states):
            np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)


# -- effective_activation_apply ---------------------------------------------------


def test_effective_theta_zero():
    fwd, rev = specs(6)
    raw, norm = effective_activation_apply(psi0(6), fwd, rev, 0.0)
    assert norm == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(raw.amplitudes, evolve_definite(psi0(6), fwd).final.amplitudes, atol=1e-15)


def test_effective_identical_branches():
    fwd, _ = specs(6)
    raw, norm = effective_activation_apply(psi0(6), fwd, fwd, PI / 4)
    assert norm == pytest.approx(math.sqrt(2), abs=1e-12)
    np.testing.assert_allclose(raw.amplitudes, math.sqrt(2) * evolve_definite(psi0(6), fwd).final.amplitudes, atol=1e-14)


def test_ico_distribution_differs_from_definite_orders():
    N = 100
    fwd, rev = specs(N)
    raw, norm = effective_activation_apply(psi0(N), fwd, rev, PI / 4)
    p = lambda s: np.sum(np.abs(s.amplitudes) ** 2, axis=0)  # noqa: E731
    p_ico = p(raw) / norm**2
    p_fwd = p(evolve_definite(psi0(N), fwd).final)
    p_rev = p(evolve_definite(psi0(N), rev).final)
    assert np.max(np.abs(p_ico - p_fwd)) > 1e-3
    assert np.max(np.abs(p_ico - p_rev)) > 1e-3
    np.testing.assert_allclose(p_ico, p_ico[::-1], atol=1e-12)


# -- switched_step_evolve ---------------------------------------------------------


def test_switched_step_commuting_degenerate():
    N = 20
    step = switched_step_evolve(psi0(N), T1, T1, 0.4, N)
    definite = evolve_definite(psi0(N), PeriodicWalkSpec((T1,), N))
    for t, state in zip(step.times, step.states):
        np.testing.assert_allclose(state.amplitudes, definite.states[t].amplitudes, atol=1e-12)
    assert step.norms[-1] == pytest.approx((math.cos(0.4) + math.sin(0.4)) ** (N // 2), rel=1e-12)


def test_switched_step_theta_zero_is_forward():
    N = 20
    step = switched_step_evolve(psi0(N), T1, T2, 0.0, N)
    definite = evolve_definite(psi0(N), PeriodicWalkSpec((T1, T2), N))
    for t, state in zip(step.times, step.states):
        np.testing.assert_allclose(state.amplitudes, definite.states[t].amplitudes, atol=1e-12)


def test_switched_step_matches_operator():
    N = 8
    L = 2 * N + 3
    step = switched_step_evolve(psi0(N), T2, T1, PI / 4, N)
    vec = switched_step_operator(T2, T1, PI / 4, N, L) @ psi0(N).to_vector()
    np.testing.assert_allclose(step.norms[-1] * step.final.to_vector(), vec, atol=1e-12)


def test_switched_step_localizes():
    N = 100
    step = switched_step_evolve(psi0(N), PI / 6, PI / 4, PI / 4, N)
    forward = evolve_definite(psi0(N), PeriodicWalkSpec((PI / 6, PI / 4), N))
    early = [state_spread(s) - state_spread(forward.states[t]) for t, s in zip(step.times, step.states) if t < 30]
    assert max(early) > 0
    assert state_spread(step.final) < state_spread(forward.final)


def test_switched_step_odd():
    with pytest.raises(SpecError):
        switched_step_evolve(psi0(5), T1, T2, PI / 4, 5)


# -- expansions ---------------------------------------------------------------


def test_expand_n2_two_terms():
    L = 7
    op = expand_switched_step(T1, T2, 0.3, 2, L)
    u1 = brute_force_operator([CoinSpec(T2), CoinSpec(T1)], L)
    u2 = brute_force_operator([CoinSpec(T1), CoinSpec(T2)], L)
    np.testing.assert_allclose(op, math.cos(0.3) * u1 + math.sin(0.3) * u2, atol=1e-12)


def test_expand_multiplicities():
    assert [len(v) for v in switched_step_subsets(4).values()] == [1, 2, 1]


def test_expand_duality():
    N, L = 6, 15
    a = expand_switched_step(T1, T2, 0.3, N, L)
    b = expand_switched_step(T2, T1, PI / 2 - 0.3, N, L)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_expand_wrong_regime():
    with pytest.raises(WrongRegimeError):
        expand_switched_step(T1, T1 + PI, 0.3, 4, 11)


def test_expand_budget():
    with pytest.raises(BudgetError):
        expand_switched_step(T1, T2, 0.3, 14, 31)


@given(angles, angles, angles, st.sampled_from([2, 4, 6, 8]))
def test_expansion_equivalence(t1, t2, ts, N):
    if abs(math.sin(t2 - t1)) < 1e-6:
        return
    L = 2 * N + 3
    direct = switched_step_operator(t1, t2, ts, N, L)
    np.testing.assert_allclose(expand_switched_step(t1, t2, ts, N, L), direct, atol=1e-10)
    np.testing.assert_allclose(sum_terms(enumerate_step_sequences(t1, t2, ts, N), L), direct, atol=1e-10)


def test_binomial_n0():
    N, L, ts = 6, 15, 0.3
    u = brute_force_operator([CoinSpec(T1)] * 2, L)
    expected = (math.cos(ts) + math.sin(ts)) ** 3 * np.linalg.matrix_power(u, 3)
    np.testing.assert_allclose(binomial_commuting_expand(T1, ts, 0, N, L), expected, atol=1e-12)


def test_binomial_n1_two_steps():
    L = 7
    op = binomial_commuting_expand(T1, 0.3, 1, 2, L)
    np.testing.assert_allclose(op, switched_step_operator(T1, T1 + PI, 0.3, 2, L), atol=1e-12)


def test_binomial_theta_s_zero():
    N, L = 6, 15
    u = brute_force_operator([CoinSpec(T1)] * 2, L)
    np.testing.assert_allclose(binomial_commuting_expand(T1, 0.0, 0, N, L), np.linalg.matrix_power(u, 3), atol=1e-12)


@given(angles, angles, st.integers(-2, 2), st.sampled_from([2, 4, 6, 8]))
def test_binomial_equivalence(t1, ts, n, N):
    L = 2 * N + 3
    np.testing.assert_allclose(
        binomial_commuting_expand(t1, ts, n, N, L), switched_step_operator(t1, t1 + n * PI, ts, N, L), atol=1e-10
    )


# -- full activation ------------------------------------------------------------


def test_full_k1_is_definite():
    raw, norm = full_activation_apply(psi0(6), (T1,), 6)
    assert norm == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(raw.amplitudes, evolve_definite(psi0(6), PeriodicWalkSpec((T1,), 6)).final.amplitudes, atol=1e-14)


def test_full_k2_matches_switch():
    fwd, rev = specs(8)
    raw, _ = full_activation_apply(psi0(8), (T1, T2), 8)
    eff, _ = effective_activation_apply(psi0(8), fwd, rev, PI / 4)
    np.testing.assert_allclose(raw.amplitudes, eff.amplitudes, atol=1e-12)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_full_equal_thetas(k):
    N = 12
    raw, norm = full_activation_apply(psi0(N), (T1,) * k, N)
    assert norm == pytest.approx(math.sqrt(math.factorial(k)), rel=1e-12)


def test_full_budget_and_divisibility():
    with pytest.raises(BudgetError):
        full_activation_apply(psi0(12), (0.1,) * 6, 12)
    with pytest.raises(SpecError):
        full_activation_apply(psi0(7), (0.1, 0.2), 7)


def test_full_trajectory_final_matches_apply():
    traj = full_activation_trajectory(psi0(9), (0.1, 0.5, 0.9), 9)
    raw, norm = full_activation_apply(psi0(9), (0.1, 0.5, 0.9), 9)
    np.testing.assert_allclose(traj.final.amplitudes, raw.amplitudes / norm, atol=1e-12)
    assert traj.norms[-1] == pytest.approx(norm)
