import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glimmreact.errors import RangeError, SonicError
from glimmreact.gas import GasModel, State, eigenvalues, entropy, fluxes, kappa, right_eigenvector
from glimmreact.waves import (compose, compose_path, contact_2, contact_3, contact_4,
                              rarefaction, shock, shock_residuals, wave_curve)
from strategies import supersonic_states

G = GasModel()
BASE = State(2.0, 0.0, 1.0, 1.0, 0.0)


def prandtl_meyer(M, gam=1.4):
    a = math.sqrt((gam + 1) / (gam - 1))
    b = math.sqrt(M * M - 1)
    return a * math.atan(b / a) - math.atan(b)


def flow_angle_and_mach(U, gam=1.4):
    c = math.sqrt(gam * U.p / U.rho)
    return math.atan2(U.v, U.u), math.hypot(U.u, U.v) / c


def total_enthalpy(U, gam=1.4):
    return 0.5 * (U.u ** 2 + U.v ** 2) + gam * U.p / ((gam - 1) * U.rho)


# ---------------------------------------------------------------- contacts

def test_contact_2_examples():
    assert np.allclose(contact_2(math.log(2), BASE, G).as_array(), [4, 0, 1, 1, 0], atol=1e-15)
    assert contact_2(0.0, BASE, G) == BASE
    back = contact_2(-math.log(2), contact_2(math.log(2), BASE, G), G)
    assert np.allclose(back.as_array(), BASE.as_array(), atol=1e-15)


def test_contact_2_sonic():
    with pytest.raises(SonicError):
        contact_2(math.log(0.5), BASE, G)


def test_contact_3_examples():
    out = contact_3(math.log(3), BASE, G)
    assert out.rho == pytest.approx(3.0, rel=1e-15)
    assert (out.u, out.v, out.p, out.z) == (BASE.u, BASE.v, BASE.p, BASE.z)
    assert contact_3(0.0, BASE, G) == BASE
    assert contact_3(-0.3, contact_3(0.3, BASE, G), G).rho == pytest.approx(1.0, rel=1e-15)


def test_contact_4_examples():
    U = State(2.0, 0.0, 1.0, 1.0, 0.2)
    assert contact_4(0.3, U).z == pytest.approx(0.5, abs=1e-16)
    assert contact_4(0.0, U) == U
    assert contact_4(-0.2, U).z == 0.0
    with pytest.raises(RangeError):
        contact_4(0.9, U)


@given(supersonic_states(mach_min=1.6), st.floats(-0.1, 0.1), st.floats(-0.3, 0.3),
       st.floats(-0.1, 0.1))
def test_composite_contact_keeps_direction_and_pressure(U, s2, s3, a4):
    a4 = min(max(a4, -U.z), 1.0 - U.z)
    out = compose((0.0, s2, s3, a4, 0.0), U, G)
    assert out.p == U.p
    assert out.v / out.u == pytest.approx(U.v / U.u, rel=1e-14, abs=1e-16)


# ---------------------------------------------------------------- rarefactions

def test_rarefaction_zero_strength():
    assert np.array_equal(rarefaction(5, 0.0, BASE, G).as_array(), BASE.as_array())


def test_rarefaction_strength_is_slope_change():
    out = rarefaction(5, 0.05, BASE, G)
    assert eigenvalues(out, G)[4] - eigenvalues(BASE, G)[4] == pytest.approx(0.05, abs=1e-8)


def _rk_reference(i, alpha, U, n=4000):
    """Classical RK4 on dU/dalpha = r_i(U) with many steps."""
    a = U.as_array()
    dt = alpha / n
    f = lambda x: right_eigenvector(State.from_array(x), i, G)
    for _ in range(n):
        k1 = f(a)
        k2 = f(a + 0.5 * dt * k1)
        k3 = f(a + 0.5 * dt * k2)
        k4 = f(a + dt * k3)
        a = a + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return a


@pytest.mark.parametrize("i", [1, 5])
def test_rarefaction_against_fine_integration(i):
    ref = _rk_reference(i, 0.05, BASE)
    assert np.allclose(rarefaction(i, 0.05, BASE, G).as_array(), ref, rtol=0, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(supersonic_states(mach_min=1.5), st.sampled_from([1, 5]), st.floats(1e-3, 0.2))
def test_rarefaction_is_a_prandtl_meyer_simple_wave(U, i, alpha):
    out = rarefaction(i, alpha, U, G)
    th0, M0 = flow_angle_and_mach(U)
    th1, M1 = flow_angle_and_mach(out)
    # waves of family 5 keep theta + nu, family 1 keeps theta - nu
    sgn = 1.0 if i == 5 else -1.0
    assert th1 + sgn * prandtl_meyer(M1) == pytest.approx(th0 + sgn * prandtl_meyer(M0), abs=1e-9)
    assert total_enthalpy(out) == pytest.approx(total_enthalpy(U), rel=1e-10)
    assert entropy(out, G) == pytest.approx(entropy(U, G), abs=1e-9)
    assert out.z == U.z
    # family-1 waves are crossed from below, family-5 waves from above;
    # either way the downstream side is the faster one
    assert (M1 > M0) if i == 1 else (M1 < M0)


# ---------------------------------------------------------------- shocks

@settings(max_examples=60, deadline=None)
@given(supersonic_states(mach_min=1.5), st.sampled_from([1, 5]), st.floats(-0.2, -1e-4))
def test_shock_satisfies_conservation_form(U, i, alpha):
    out, s = shock(i, alpha, U, G)
    Wa, Ha, _ = fluxes(U, G)
    Wb, Hb, _ = fluxes(out, G)
    # steady jump across the line y = s x: s [W] = [H]
    scale = np.abs(Wa).max()
    assert np.abs(s * (Wb - Wa) - (Hb - Ha)).max() <= 1e-10 * scale
    assert np.abs(shock_residuals(i, U, out, s, G)).max() <= 1e-10
    assert out.z == U.z


@settings(max_examples=60, deadline=None)
@given(supersonic_states(mach_min=1.5), st.sampled_from([1, 5]), st.floats(-0.2, -1e-4))
def test_shock_admissible_and_parametrized_by_slope_drop(U, i, alpha):
    out, s = shock(i, alpha, U, G)
    # upstream is the lower state for family 1 and the upper one for family 5
    up, down = (U, out) if i == 1 else (out, U)
    assert entropy(down, G) > entropy(up, G)
    assert down.p > up.p and down.rho > up.rho
    lam = eigenvalues(out, G)[i - 1] - eigenvalues(U, G)[i - 1]
    assert lam == pytest.approx(alpha, abs=1e-10)


def test_weak_shock_limit():
    out, s = shock(1, -1e-9, BASE, G)
    assert np.allclose(out.as_array(), BASE.as_array(), atol=1e-8)
    assert s == pytest.approx(eigenvalues(BASE, G)[0], abs=1e-8)


def test_reference_shock_example():
    out, s = shock(1, -0.05, BASE, G)
    assert np.abs(shock_residuals(1, BASE, out, s, G)).max() <= 1e-10


# ---------------------------------------------------------------- Lax map

@pytest.mark.parametrize("i", [1, 2, 3, 4, 5])
def test_wave_curve_identity(i):
    U = State(2.0, 0.1, 1.0, 1.0, 0.5)
    assert np.allclose(wave_curve(i, 0.0, U, G).as_array(), U.as_array(), atol=0)


@pytest.mark.parametrize("i", [1, 5])
@pytest.mark.parametrize("U", [BASE, State(2.4, 0.0, 1.0, 0.8, 0.0), State(2.2, 0.1, 1.1, 0.9, 0.3)])
def test_one_sided_tangents_match_eigenvector(i, U):
    eps = 1e-4
    a = U.as_array()
    r = right_eigenvector(U, i, G)
    plus = (-3 * a + 4 * wave_curve(i, eps, U, G).as_array()
            - wave_curve(i, 2 * eps, U, G).as_array()) / (2 * eps)
    minus = (3 * a - 4 * wave_curve(i, -eps, U, G).as_array()
             + wave_curve(i, -2 * eps, U, G).as_array()) / (2 * eps)
    assert np.abs(plus - r).max() <= 1e-6
    assert np.abs(minus - r).max() <= 1e-6


def test_kappa5_positive_at_background():
    assert kappa(BASE, 5, G) > 0.0


@given(supersonic_states(mach_min=1.5), st.sampled_from([1, 5]), st.floats(0.0, 0.1))
def test_branches_agree_to_first_order(U, i, a):
    d = np.abs(wave_curve(i, a, U, G).as_array() - wave_curve(i, -a, U, G).as_array()).max()
    assert d <= 10.0 * a + 1e-12


def test_compose_identity_and_background(U1, U2):
    assert np.array_equal(compose(np.zeros(5), U1, G).as_array(), U1.as_array())
    s20 = math.log(U2.u / U1.u)
    s30 = math.log(U2.rho / U1.rho)
    out = compose((0.0, s20, s30, 0.0, 0.0), U1, G)
    assert np.allclose(out.as_array(), U2.as_array(), rtol=1e-15, atol=1e-15)


def test_compose_path_records_each_wave(U1):
    S, speeds = compose_path((0.01, 0.02, -0.03, 0.0, -0.02), U1, G)
    assert np.array_equal(S[0], U1.as_array())
    assert np.allclose(S[1], wave_curve(1, 0.01, U1, G).as_array(), atol=0)
    assert speeds[0] <= speeds[1] < speeds[2] < speeds[3] <= speeds[4]


# measured once at the background: max |U_b - U_a|_inf / sum|alpha| over strengths <= 0.1
COMPOSE_LIPSCHITZ = 3.0


@given(st.tuples(*(st.floats(-0.1, 0.1) for _ in range(5))))
def test_compose_lipschitz_regression(alpha):
    U = State(2.0, 0.0, 1.0, 1.0, 0.5)
    alpha = np.array(alpha)
    out = compose(alpha, U, G)
    assert np.abs(out.as_array() - U.as_array()).max() <= COMPOSE_LIPSCHITZ * np.abs(alpha).sum() + 1e-15
