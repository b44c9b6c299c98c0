import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glimmreact.errors import DomainError, StepTooLarge
from glimmreact.gas import GasModel, State, fluxes
from glimmreact.reaction import react
from strategies import supersonic_states

ARRHENIUS = GasModel(mu=1.0, eact=1.0)
UNIT_RATE = GasModel(mu=1.0, eact=0.0)  # phi = T, which is 1 at p = rho = 1


def rate(U, g):
    T = U.p / (g.R * U.rho)
    return T ** g.mu * math.exp(-g.eact / (g.R * T))


def balance(U, out, h, g):
    W0, _, G0 = fluxes(U, g)
    W1, _, _ = fluxes(out, g)
    return W1 - W0 - G0 * h


def test_no_reactant_is_identity():
    U = State(2.0, 0.1, 1.0, 1.0, 0.0)
    assert react(U, 0.05, ARRHENIUS).state == U


def test_zero_step_is_identity():
    U = State(2.0, 0.1, 1.0, 1.0, 0.7)
    assert react(U, 0.0, ARRHENIUS).state == U


def test_reference_example():
    U = State(2.0, 0.0, 1.0, 1.0, 0.5)
    out = react(U, 0.01, UNIT_RATE)
    assert out.state.z == 0.4975
    assert out.z_factor == pytest.approx(0.995, abs=1e-16)
    assert out.heat_released == pytest.approx(0.005, abs=1e-16)
    assert np.abs(balance(U, out.state, 0.01, UNIT_RATE)).max() <= 1e-12


@given(supersonic_states(mach_min=1.5, zmax=1.0), st.floats(0.0, 0.9))
def test_flux_balance_and_monotonicity(U, frac):
    g = ARRHENIUS
    h = frac * U.u / rate(U, g)
    try:
        out = react(U, h, g)
    except StepTooLarge:
        # large heat release can choke the flow; only the no-root branch may refuse
        return
    V = out.state
    assert np.abs(balance(U, V, h, g)).max() <= 1e-12 * max(1.0, np.abs(fluxes(U, g)[0]).max())
    assert V.z == (1.0 - rate(U, g) * h / U.u) * U.z
    assert V.v == U.v
    assert V.p / V.rho >= U.p / U.rho
    assert V.rho * V.u * V.v == pytest.approx(U.rho * U.u * U.v, abs=1e-14)


@given(supersonic_states(mach_min=2.0, zmax=1.0), st.floats(1e-5, 1e-2))
def test_first_order_consistency(U, h):
    # measured once around the background states: |V~ - V| / (Z h) <= 2
    V = react(U, h, ARRHENIUS).state
    d = np.abs(V.as_array()[:4] - U.as_array()[:4]).max()
    assert d <= 2.0 * U.z * h * max(1.0, rate(U, ARRHENIUS)) + 1e-15


def test_step_too_large():
    U = State(2.0, 0.0, 1.0, 1.0, 0.5)
    with pytest.raises(StepTooLarge):
        react(U, 2.5, UNIT_RATE)


@pytest.mark.parametrize("U", [State(2.0, 0.0, -1.0, 1.0, 0.5), State(2.0, 0.0, 1.0, 1.0, 1.5),
                               State(2.0, 0.0, 1.0, 1.0, -0.1)])
def test_domain_errors(U):
    with pytest.raises(DomainError):
        react(U, 0.01, ARRHENIUS)
