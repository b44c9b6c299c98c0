"""Riemann solvers for weak waves, the wall, and the strong contact."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import ConfigError, DegenerateJacobian, NoConvergence, raise_for_status
from .gas import GasModel, State, check_supersonic, kappa

KIND_CODES = {"trivial": K.FAN_TRIVIAL, "weak": K.FAN_WEAK, "strong": K.FAN_STRONG,
              "boundary": K.FAN_BOUNDARY}

PRESSURE_RATIO_MAX = 1.5


@dataclass(frozen=True)
class WaveFan:
    """Resolved Riemann problem at one diamond.

    Attributes
    ----------
    below_state : State
        State below the fan.
    strengths : ndarray, shape (5,)
        ``(alpha1, sigma2, sigma3, alpha4, alpha5)``. For a wall fan only
        ``alpha1`` is nonzero.
    speeds : ndarray, shape (5,)
        1-wave slope range, contact slope, 5-wave slope range.
    states : ndarray, shape (6, 5)
        Below state, the state after each wave in order, above state.
    kind : str
        One of ``weak``, ``strong``, ``boundary`` or ``trivial``.
    """

    below_state: State
    strengths: np.ndarray
    speeds: np.ndarray
    states: np.ndarray
    kind: str = "weak"
    iterations: int = 0
    det: float = field(default=math.nan)

    @property
    def above_state(self) -> State:
        return State.from_array(self.states[5])

    @property
    def intermediate_states(self) -> list[State]:
        return [State.from_array(self.states[k]) for k in range(1, 5)]

    @property
    def strong(self) -> bool:
        return self.kind == "strong"


def _fan(Ua, x, S, speeds, kind, it, det=math.nan) -> WaveFan:
    strengths = np.array([x[0], x[1], x[2], S[5, 4] - S[0, 4], x[3]])
    return WaveFan(State.from_array(Ua), strengths, speeds.copy(), S.copy(), kind, it, det)


def _solve(Ua, Ub, g, x0, label):
    x = np.empty(4)
    S = np.empty((6, 5))
    speeds = np.empty(5)
    st, it = K.riemann_full(Ua, Ub, g.gamma, np.asarray(x0, dtype=float), x, S, speeds)
    raise_for_status(st, f"{label} Riemann solve failed after {it} iterations")
    return x, S, speeds, it


def solve_weak(U_a, U_b, g: GasModel) -> WaveFan:
    """Five-wave solution connecting U_a (below) to U_b (above).

    Newton iteration from zero strengths; the alpha4 slot is the exact
    reactant jump.
    """
    Ua = check_supersonic(U_a, g)
    Ub = check_supersonic(U_b, g)
    x, S, speeds, it = _solve(Ua, Ub, g, np.zeros(4), "weak")
    return _fan(Ua, x, S, speeds, "weak", it)


def strong_jacobian(U_a, x, g: GasModel) -> np.ndarray:
    """Central-difference Jacobian of the composition in (alpha1, sigma2, sigma3, alpha5)."""
    Ua = check_supersonic(U_a, g)
    J = np.empty((4, 4))
    st = K.jacobian_fd(np.asarray(x, dtype=float), Ua, g.gamma, J)
    raise_for_status(st, "Jacobian evaluation")
    return J


def solve_strong_contact(U_a, U_b, g: GasModel) -> WaveFan:
    """Weak 1-wave, strong contact and weak 5-wave connecting U_a to U_b.

    Raises
    ------
    ConfigError
        If the pressure ratio exceeds 1.5.
    DegenerateJacobian
        If the Jacobian determinant at the solution is below 1e-10 in
        magnitude.
    """
    Ua = check_supersonic(U_a, g)
    Ub = check_supersonic(U_b, g)
    ratio = max(Ua[2] / Ub[2], Ub[2] / Ua[2])
    if ratio > PRESSURE_RATIO_MAX:
        raise ConfigError(f"pressure ratio {ratio:.3f} exceeds {PRESSURE_RATIO_MAX}")
    x0 = np.array([
        0.0,
        0.5 * math.log((Ub[0] ** 2 + Ub[1] ** 2) / (Ua[0] ** 2 + Ua[1] ** 2)),
        math.log(Ub[3] / Ua[3]),
        0.0,
    ])
    x, S, speeds, it = _solve(Ua, Ub, g, x0, "strong-contact")
    det = float(np.linalg.det(strong_jacobian(Ua, x, g)))
    if not abs(det) >= K.DET_MIN:
        raise DegenerateJacobian(f"|det| = {abs(det):.3e} at the strong contact")
    return _fan(Ua, x, S, speeds, "strong", it, det)


def strong_det_closed_form(U1, U2, g: GasModel) -> float:
    """Jacobian determinant of the strong-contact problem at a background pair.

    The pair must have zero vertical velocity and equal pressure.
    """
    a1 = check_supersonic(U1, g)
    a2 = check_supersonic(U2, g)
    s2 = math.log(a2[0] / a1[0])
    s3 = math.log(a2[3] / a1[3])
    lam1 = K.lam15(a1, g.gamma, 1.0)
    lam2 = K.lam15(a2, g.gamma, 1.0)
    return (kappa(a1, 1, g) * kappa(a2, 5, g) * a1[3] ** 2 * a1[0] ** 2
            * math.exp(s2 + s3) * (lam2 * math.exp(2 * s2 + s3) + lam1))


def solve_boundary(U_a, omega: float, g: GasModel) -> tuple[float, WaveFan]:
    """1-wave turning U_a parallel to a wall segment inclined at ``omega``.

    Returns
    -------
    gamma1 : float
        Strength of the reflected 1-wave.
    fan : WaveFan
        Fan with the wall state in every slot above the 1-wave.
    """
    Ua = check_supersonic(U_a, g)
    wall = np.empty(5)
    sp = np.empty(2)
    st, g1 = K.boundary(Ua, float(omega), g.gamma, wall, sp)
    if st == K.ST_NOCONV:
        raise NoConvergence(f"boundary solve at omega={omega}")
    raise_for_status(st, f"boundary solve at omega={omega}")
    S = np.empty((6, 5))
    S[0] = Ua
    S[1:] = wall
    speeds = np.array([sp[0], sp[1], math.inf, math.inf, math.inf])
    strengths = np.array([g1, 0.0, 0.0, 0.0, 0.0])
    return float(g1), WaveFan(State.from_array(Ua), strengths, speeds, S, "boundary")


def sample_fan(fan: WaveFan, xi: float, g: GasModel) -> State:
    """State of the fan along the ray of slope ``xi``.

    On a shock or contact slope the lower state is returned.
    """
    out = np.empty(5)
    st = K.sample_fan(KIND_CODES[fan.kind], np.asarray(fan.strengths, dtype=float),
                      np.ascontiguousarray(fan.states), np.asarray(fan.speeds, dtype=float),
                      float(xi), g.gamma, out)
    raise_for_status(st, "fan sampling")
    return State.from_array(out)
