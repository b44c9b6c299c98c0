import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glimmreact.cases import U1_BACKGROUND, U2_BACKGROUND
from glimmreact.diagnostics import probe_boundary_coefficients
from glimmreact.errors import ConfigError
from glimmreact.gas import GasModel, State, eigenvalues, kappa
from glimmreact.riemann import (sample_fan, solve_boundary, solve_strong_contact, solve_weak,
                                strong_det_closed_form)
from glimmreact.waves import compose
from strategies import supersonic_states

G = GasModel()

strengths = st.tuples(*(st.floats(-0.05, 0.05) for _ in range(5)))


# ---------------------------------------------------------------- weak

def test_weak_trivial(U1):
    fan = solve_weak(U1, U1, G)
    assert np.array_equal(fan.strengths, np.zeros(5))


@settings(max_examples=60)
@given(supersonic_states(mach_min=1.6, zmax=0.5), strengths)
def test_weak_round_trip(U, alpha):
    alpha = np.array(alpha)
    alpha[3] = min(max(alpha[3], -U.z), 1.0 - U.z)
    Ub = compose(alpha, U, G)
    fan = solve_weak(U, Ub, G)
    assert np.abs(fan.strengths - alpha).max() <= 1e-8
    assert np.allclose(fan.states[5], Ub.as_array(), rtol=0, atol=1e-11)


def test_weak_alpha4_exact():
    Ua = State(2.0, 0.0, 1.0, 1.0, 0.3)
    Ub = State(2.01, 0.01, 1.02, 0.99, 0.7)
    assert solve_weak(Ua, Ub, G).strengths[3] == Ub.z - Ua.z


@given(supersonic_states(mach_min=1.6), strengths)
def test_weak_fan_structure(U, alpha):
    alpha = np.array(alpha)
    alpha[3] = 0.0
    fan = solve_weak(U, compose(alpha, U, G), G)
    sp = fan.speeds
    assert sp[0] <= sp[1] < sp[2] < sp[3] <= sp[4]
    left, right = fan.states[2], fan.states[4]
    # across the contact slot flow direction and pressure are continuous
    assert left[1] / left[0] == pytest.approx(right[1] / right[0], abs=1e-12)
    assert left[2] == pytest.approx(right[2], rel=1e-12)


# ---------------------------------------------------------------- boundary

def test_boundary_trivial():
    U = State(2.0, 0.1, 1.0, 1.0, 0.0)
    g1, _ = solve_boundary(U, math.atan2(0.1, 2.0), G)
    assert g1 == pytest.approx(0.0, abs=1e-13)


@pytest.mark.parametrize("omega", [-0.15, -0.02, 0.0, 0.01, 0.1, 0.2])
def test_boundary_wall_tangency(U2, omega):
    g1, fan = solve_boundary(U2, omega, G)
    w = fan.states[1]
    assert abs(-w[0] * math.sin(omega) + w[1] * math.cos(omega)) <= 1e-12
    assert np.array_equal(fan.strengths[1:], np.zeros(4))


def test_boundary_derivative_matches_kappa(U2):
    K_b = probe_boundary_coefficients(U2, G).K_b
    closed = U2.u / kappa(U2, 1, G)
    assert K_b > 0.0
    assert K_b == pytest.approx(closed, rel=1e-4)


def test_boundary_corner_sign(U2):
    # a wall turning up makes gamma1 > 0: an expansion in the lambda_1 parametrization
    assert solve_boundary(U2, 0.02, G)[0] > 0.0
    assert solve_boundary(U2, -0.02, G)[0] < 0.0


# ---------------------------------------------------------------- strong contact

def test_strong_background_identity(U1, U2):
    fan = solve_strong_contact(U1, U2, G)
    s20 = math.log(U2.u / U1.u)
    s30 = math.log(U2.rho / U1.rho)
    assert np.allclose(fan.strengths, [0.0, s20, s30, 0.0, 0.0], atol=1e-12)
    assert fan.strong and fan.det > 0.0


def test_strong_recovers_weak_5_wave(U1, U2):
    Ub = compose((0.0, 0.0, 0.0, 0.0, 0.02), U2, G)
    fan = solve_strong_contact(U1, Ub, G)
    s20 = math.log(U2.u / U1.u)
    s30 = math.log(U2.rho / U1.rho)
    assert fan.strengths[4] == pytest.approx(0.02, abs=1e-3)
    assert fan.strengths[1] == pytest.approx(s20, abs=1e-3)
    assert fan.strengths[2] == pytest.approx(s30, abs=1e-3)


def test_strong_det_closed_form(U1, U2):
    fan = solve_strong_contact(U1, U2, G)
    closed = strong_det_closed_form(U1, U2, G)
    assert closed > 0.0
    assert fan.det == pytest.approx(closed, rel=1e-4)


@settings(max_examples=30)
@given(st.tuples(*(st.floats(-0.1, 0.1) for _ in range(4))),
       st.tuples(*(st.floats(-0.1, 0.1) for _ in range(4))))
def test_strong_det_positive_near_background(da, db):
    U1, U2 = U1_BACKGROUND, U2_BACKGROUND
    Ua = State(U1.u + da[0], da[1], U1.p + da[2], U1.rho + da[3], 0.0)
    Ub = State(U2.u + db[0], db[1], U2.p + db[2], U2.rho + db[3], 0.0)
    fan = solve_strong_contact(Ua, Ub, G)
    assert fan.det > 0.0
    assert np.allclose(compose(fan.strengths, Ua, G).as_array(), Ub.as_array(), atol=1e-11)


def test_strong_rejects_pressure_ratio(U1, U2):
    with pytest.raises(ConfigError):
        solve_strong_contact(U1, State(U2.u, 0.0, 1.6, U2.rho, 0.0), G)


# ---------------------------------------------------------------- sampling

@pytest.fixture
def rarefaction_fan(U1):
    return solve_weak(U1, compose((0.0, 0.0, 0.0, 0.0, 0.05), U1, G), G)


def test_sample_outside(U1, rarefaction_fan):
    fan = rarefaction_fan
    assert sample_fan(fan, fan.speeds[0] - 1.0, G) == U1
    assert np.array_equal(sample_fan(fan, fan.speeds[4] + 1.0, G).as_array(), fan.states[5])


@pytest.mark.parametrize("t", [0.1, 0.37, 0.5, 0.9])
def test_sample_inside_rarefaction(rarefaction_fan, t):
    lo, hi = rarefaction_fan.speeds[3], rarefaction_fan.speeds[4]
    xi = lo + t * (hi - lo)
    assert eigenvalues(sample_fan(rarefaction_fan, xi, G), G)[4] == pytest.approx(xi, abs=1e-9)


def test_sample_monotone_in_rarefaction(rarefaction_fan):
    lo, hi = rarefaction_fan.speeds[3], rarefaction_fan.speeds[4]
    lam = [eigenvalues(sample_fan(rarefaction_fan, xi, G), G)[4] for xi in np.linspace(lo, hi, 11)]
    assert np.all(np.diff(lam) > 0.0)


def test_sample_tie_returns_lower_state(U1):
    fan = solve_weak(U1, compose((-0.03, 0.0, 0.0, 0.0, 0.0), U1, G), G)
    assert fan.speeds[0] == fan.speeds[1]
    assert sample_fan(fan, fan.speeds[0], G) == U1
