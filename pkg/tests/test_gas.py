import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glimmreact.errors import ConfigError, DomainError, SonicError
from glimmreact.gas import (GasModel, State, check_supersonic, eigenvalues, entropy, fluxes,
                            kappa, rate, right_eigenvector, sound_speed, temperature)
from strategies import supersonic_states


def test_gas_model_rejects_bad_parameters():
    for kw in ({"gamma": 1.0}, {"R": 0.0}, {"q0": -1.0}, {"mu": 0.0}, {"eact": -0.1}):
        with pytest.raises(ConfigError):
            GasModel(**kw)


def test_cv_matches_definition():
    g = GasModel(gamma=1.3, R=2.0)
    assert g.cv == pytest.approx(2.0 / 0.3, rel=1e-15)


@pytest.mark.parametrize("p, rho, c", [(1.0, 1.0, math.sqrt(1.4)), (1 / 1.4, 1.0, 1.0),
                                       (2.0, 0.5, math.sqrt(5.6))])
def test_sound_speed_examples(gas, p, rho, c):
    assert sound_speed(p, rho, gas) == pytest.approx(c, rel=1e-14)


def test_sound_speed_domain(gas):
    with pytest.raises(DomainError):
        sound_speed(0.0, 1.0, gas)
    with pytest.raises(DomainError):
        sound_speed(1.0, -1.0, gas)


@pytest.mark.parametrize("p, rho, R, T", [(1.0, 1.0, 1.0, 1.0), (2.0, 4.0, 1.0, 0.5),
                                          (1.0, 1.0, 287.0, 1 / 287.0)])
def test_temperature_examples(p, rho, R, T):
    assert temperature(p, rho, GasModel(R=R)) == pytest.approx(T, rel=1e-14)


@pytest.mark.parametrize("T, mu, eact, phi", [(1.0, 1.0, 0.0, 1.0), (1.0, 1.0, 1.0, math.exp(-1)),
                                              (2.0, 0.5, 0.0, math.sqrt(2.0))])
def test_rate_examples(T, mu, eact, phi):
    assert rate(T, GasModel(mu=mu, eact=eact)) == pytest.approx(phi, rel=1e-14)


def test_rate_domain(gas):
    with pytest.raises(DomainError):
        rate(0.0, gas)


@given(st.floats(0.05, 2.0), st.floats(0.1, 3.0), st.floats(0.0, 5.0))
def test_rate_nondecreasing_on_band(T0, mu, eact):
    g = GasModel(mu=mu, eact=eact)
    T = np.linspace(T0, 10 * T0, 50)
    phi = [rate(t, g) for t in T]
    assert np.all(np.diff(phi) >= 0.0)


def test_eigenvalues_background(gas):
    lam = eigenvalues(State(2.0, 0.0, 1.0, 1.0, 0.0), gas)
    expected = math.sqrt(1.4) * math.sqrt(2.6) / 2.6
    assert lam[4] == pytest.approx(expected, rel=1e-14)
    assert lam[0] == pytest.approx(-expected, rel=1e-14)
    assert np.all(lam[1:4] == 0.0)


def test_eigenvalues_tilted(gas):
    lam = eigenvalues(State(2.0, 0.2, 1.0, 1.0, 0.0), gas)
    assert np.allclose(lam[1:4], 0.1, rtol=0, atol=1e-15)
    assert lam[0] < 0.1 < lam[4]


def test_subsonic_rejected(gas):
    with pytest.raises(SonicError):
        eigenvalues(State(1.0, 0.0, 1.0, 1.0, 0.0), gas)
    with pytest.raises(SonicError):
        check_supersonic(State(math.sqrt(1.4), 0.0, 1.0, 1.0, 0.0), gas)


def _jacobians(U, g, eps=1e-6):
    a = np.asarray(U.as_array(), dtype=float)
    JW = np.empty((5, 5))
    JH = np.empty((5, 5))
    for k in range(5):
        d = np.zeros(5)
        d[k] = eps
        Wp, Hp, _ = fluxes(State.from_array(a + d), g)
        Wm, Hm, _ = fluxes(State.from_array(a - d), g)
        JW[:, k] = (Wp - Wm) / (2 * eps)
        JH[:, k] = (Hp - Hm) / (2 * eps)
    return JW, JH


@settings(max_examples=40, deadline=None)
@given(supersonic_states())
def test_eigenvalues_solve_characteristic_problem(U):
    g = GasModel()
    lam = eigenvalues(U, g)
    JW, JH = _jacobians(U, g)
    # generalized eigenvalues of (JH, JW)
    ev = np.linalg.eigvals(np.linalg.solve(JW, JH))
    ev = np.sort(ev.real)
    assert np.allclose(ev, np.sort(lam), atol=1e-6)
    assert lam[0] < lam[1] == lam[2] == lam[3] < lam[4]


@settings(max_examples=40, deadline=None)
@given(supersonic_states(), st.sampled_from([1, 5]))
def test_right_eigenvector_and_kappa(U, i):
    g = GasModel()
    JW, JH = _jacobians(U, g)
    lam = eigenvalues(U, g)[i - 1]
    r = right_eigenvector(U, i, g)
    assert np.linalg.norm((lam * JW - JH) @ r) <= 1e-6 * max(1.0, np.linalg.norm(r))
    # kappa normalizes r so that grad(lambda) . r = 1
    eps = 1e-6
    a = U.as_array()
    lp = eigenvalues(State.from_array(a + eps * r), g)[i - 1]
    lm = eigenvalues(State.from_array(a - eps * r), g)[i - 1]
    assert (lp - lm) / (2 * eps) == pytest.approx(1.0, rel=1e-6)


def test_kappa_positive_at_backgrounds(gas, U1, U2):
    for U in (U1, U2):
        assert kappa(U, 1, gas) > 0.0
        assert kappa(U, 5, gas) > 0.0


@pytest.mark.parametrize("p, rho, gam, S", [(1.0, 1.0, 1.4, 0.0), (2.0 ** 1.4, 2.0, 1.4, 0.0)])
def test_entropy_examples(p, rho, gam, S):
    assert entropy(State(3.0, 0.0, p, rho), GasModel(gamma=gam)) == pytest.approx(S, abs=1e-14)


def test_entropy_unit_cv():
    g = GasModel(gamma=1.4, R=0.4)
    assert g.cv == pytest.approx(1.0)
    assert entropy(State(3.0, 0.0, math.e, 1.0), g) == pytest.approx(1.0, rel=1e-14)


def test_fluxes_example(gas):
    W, H, G = fluxes(State(1.0, 0.0, 1.0, 1.0, 0.0), gas)
    assert np.allclose(W, [1.0, 2.0, 0.0, 4.0, 0.0], rtol=0, atol=1e-15)
    assert np.all(G == 0.0)


@given(supersonic_states())
def test_fluxes_h_is_w_with_roles_swapped(U):
    g = GasModel()
    W, H, _ = fluxes(U, g)
    swapped = State(U.v, U.u, U.p, U.rho, U.z)
    Ws, _, _ = fluxes(swapped, g)
    assert np.allclose(H, [Ws[0], Ws[2], Ws[1], Ws[3], Ws[4]], rtol=1e-14, atol=1e-14)


@given(supersonic_states(zmax=1.0))
def test_source_layout(U):
    g = GasModel(eact=1.0, q0=2.0)
    _, _, G = fluxes(U, g)
    T = U.p / (g.R * U.rho)
    phi = rate(T, g)
    assert np.all(G[:3] == 0.0)
    assert G[3] == pytest.approx(g.q0 * U.rho * phi * U.z, rel=1e-14, abs=1e-300)
    assert G[4] == pytest.approx(-U.rho * phi * U.z, rel=1e-14, abs=1e-300)
