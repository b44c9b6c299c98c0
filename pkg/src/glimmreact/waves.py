"""Elementary wave curves and the Lax map through a given lower state.

Families 1 and 5 are genuinely nonlinear; their strength is the change of
the corresponding characteristic slope across the wave, so positive values
are rarefactions and negative values are shocks. Families 2, 3 and 4 are
contacts that scale the velocity, scale the density, and shift the
reactant fraction respectively.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels as K
from .errors import RangeError, raise_for_status
from .gas import GasModel, State, as_array, check_supersonic


def _sign(i: int) -> float:
    if i == 1:
        return -1.0
    if i == 5:
        return 1.0
    raise ValueError(f"family must be 1 or 5, got {i}")


def contact_2(sigma2: float, U_a, g: GasModel) -> State:
    a = as_array(U_a)
    e = math.exp(sigma2)
    a[0] *= e
    a[1] *= e
    return State.from_array(check_supersonic(a, g))


def contact_3(sigma3: float, U_a, g: GasModel) -> State:
    a = as_array(U_a)
    a[3] *= math.exp(sigma3)
    return State.from_array(check_supersonic(a, g))


def contact_4(alpha4: float, U_a, g: GasModel | None = None) -> State:
    a = as_array(U_a)
    z = a[4] + alpha4
    if not (0.0 <= z <= 1.0):
        raise RangeError(f"reactant fraction {z} outside [0, 1]")
    a[4] = z
    return State.from_array(a)


def rarefaction(i: int, alpha: float, U_a, g: GasModel) -> State:
    """Integrate the i-rarefaction curve by strength ``alpha >= 0``."""
    if alpha < 0.0:
        raise ValueError("rarefaction strength must be nonnegative")
    a = check_supersonic(U_a, g)
    out = np.empty(5)
    st = K.rarefaction15(a, float(alpha), g.gamma, _sign(i), out)
    raise_for_status(st, f"{i}-rarefaction of strength {alpha}")
    return State.from_array(out)


def shock(i: int, alpha: float, U_a, g: GasModel) -> tuple[State, float]:
    """Downstream state and slope of the i-shock with strength ``alpha < 0``.

    The Hugoniot locus is parametrized by the density of the returned state
    and solved so that the characteristic slope drops by ``|alpha|``.
    """
    if alpha > 0.0:
        raise ValueError("shock strength must be nonpositive")
    a = check_supersonic(U_a, g)
    out = np.empty(5)
    st, s = K.shock15(a, float(alpha), g.gamma, _sign(i), out)
    raise_for_status(st, f"{i}-shock of strength {alpha}")
    return State.from_array(out), float(s)


def shock_state(i: int, rho: float, U_a, g: GasModel) -> tuple[State, float]:
    """Point of the i-shock locus through U_a with the given density."""
    a = check_supersonic(U_a, g)
    out = np.empty(5)
    st, s = K.shock_state(a, float(rho), g.gamma, _sign(i), out)
    raise_for_status(st, f"{i}-shock locus at rho={rho}")
    return State.from_array(out), float(s)


def shock_residuals(i: int, U_a, U_b, s: float, g: GasModel) -> np.ndarray:
    """Residuals of the four jump relations between U_a and U_b at slope s.

    The pressure jump uses the Hugoniot form ``[p] = c_a^2 [rho] / ghat``.
    """
    ua, va, pa, ra, za = as_array(U_a)
    ub, vb, pb, rb, zb = as_array(U_b)
    ca2 = g.gamma * pa / ra
    ghat = 0.5 * (g.gamma + 1.0) - 0.5 * (g.gamma - 1.0) * rb / ra
    dp = pb - pa
    dv = vb - va
    return np.array([
        dp - ca2 * (rb - ra) / ghat,
        (ub - ua) + s * dv,
        ra * (s * ua - va) * dv - dp,
        zb - za,
    ])


def wave_curve(i: int, alpha: float, U_a, g: GasModel) -> State:
    """Lax map Phi_i(alpha; U_a) for any family."""
    if i == 2:
        return contact_2(alpha, U_a, g)
    if i == 3:
        return contact_3(alpha, U_a, g)
    if i == 4:
        return contact_4(alpha, U_a, g)
    if alpha >= 0.0:
        return rarefaction(i, alpha, U_a, g)
    return shock(i, alpha, U_a, g)[0]


def compose_path(strengths, U_a, g: GasModel):
    """Apply the five waves in order; return intermediate states and speeds.

    Returns
    -------
    states : ndarray, shape (6, 5)
        U_a, then the state after each of the waves 1 to 5.
    speeds : ndarray, shape (5,)
        Slopes bounding the 1-wave, the contact slope, and the slopes
        bounding the 5-wave.
    """
    st5 = np.asarray(strengths, dtype=float)
    if st5.shape != (5,):
        raise ValueError("strengths must be (alpha1, sigma2, sigma3, alpha4, alpha5)")
    a = check_supersonic(U_a, g)
    z = a[4] + st5[3]
    if not (0.0 <= z <= 1.0):
        raise RangeError(f"reactant fraction {z} outside [0, 1]")
    x = np.array([st5[0], st5[1], st5[2], st5[4]])
    S = np.empty((6, 5))
    speeds = np.empty(5)
    st = K.compose(x, float(st5[3]), a, g.gamma, S, speeds)
    raise_for_status(st, f"composition with strengths {tuple(st5)}")
    return S, speeds


def compose(strengths, U_a, g: GasModel) -> State:
    """Apply Phi_1, Phi_2, Phi_3, Phi_4 and Phi_5 in that order."""
    S, _ = compose_path(strengths, U_a, g)
    return State.from_array(S[5])
