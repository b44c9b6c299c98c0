"""Fractional reaction substep ``W(U~) = W(U) + G(U) h``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import DomainError, raise_for_status
from .gas import GasModel, State, as_array


@dataclass(frozen=True)
class ReactionOutcome:
    """Result of one reaction step.

    Attributes
    ----------
    state : State
        Post-reaction state.
    heat_released : float
        ``q0 * rho * phi(T) * Z * h``, the energy-flux increment.
    z_factor : float
        ``1 - phi(T) h / u``, the reactant multiplier.
    """

    state: State
    heat_released: float
    z_factor: float


def react(U, h: float, g: GasModel) -> ReactionOutcome:
    """Advance U through one explicit reaction step of length h.

    The velocity ``v`` is unchanged, ``Z`` is multiplied by
    ``1 - phi(T) h / u``, and ``(u, p, rho)`` solve the mass, momentum and
    energy balances exactly through a quadratic in ``u`` whose root closest
    to the incoming ``u`` is kept.

    Raises
    ------
    StepTooLarge
        If ``phi(T) h / u >= 1`` or the quadratic has no real root.
    SonicError
        If the selected root is not supersonic.
    """
    a = as_array(U)
    if not (a[2] > 0.0 and a[3] > 0.0):
        raise DomainError("non-positive pressure or density")
    if not (0.0 <= a[4] <= 1.0):
        raise DomainError(f"reactant fraction {a[4]} outside [0, 1]")
    out = np.empty(5)
    st, fac = K.react(a, float(h), g.gamma, g.R, g.q0, g.mu, g.eact, out)
    raise_for_status(st, f"reaction step with h={h}")
    T = a[2] / (g.R * a[3])
    heat = g.q0 * a[3] * K.rate(T, g.R, g.mu, g.eact) * a[4] * h
    return ReactionOutcome(State.from_array(out), float(heat), float(fac))
