"""Polytropic reacting gas: state, eigenstructure, fluxes and reaction rate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import ConfigError, DomainError, SonicError


@dataclass(frozen=True)
class GasModel:
    """Polytropic gas with a single-step Arrhenius reaction.

    Parameters
    ----------
    gamma : float
        Ratio of specific heats, > 1.
    R : float
        Gas constant, > 0.
    q0 : float
        Specific binding energy of the unburned gas, > 0.
    mu : float
        Temperature exponent of the rate law, > 0.
    eact : float
        Activation energy, >= 0.
    """

    gamma: float = 1.4
    R: float = 1.0
    q0: float = 1.0
    mu: float = 1.0
    eact: float = 0.0

    def __post_init__(self):
        bad = []
        if not self.gamma > 1.0:
            bad.append("gamma must exceed 1")
        if not self.R > 0.0:
            bad.append("R must be positive")
        if not self.q0 > 0.0:
            bad.append("q0 must be positive")
        if not self.mu > 0.0:
            bad.append("mu must be positive")
        if not self.eact >= 0.0:
            bad.append("eact must be nonnegative")
        if bad:
            raise ConfigError("; ".join(bad))

    @property
    def cv(self) -> float:
        return self.R / (self.gamma - 1.0)


@dataclass(frozen=True)
class State:
    """Primitive flow state ``(u, v, p, rho, z)``."""

    u: float
    v: float
    p: float
    rho: float
    z: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.p, self.rho, self.z], dtype=float)

    @classmethod
    def from_array(cls, a) -> "State":
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]), float(a[4]))

    def __iter__(self):
        return iter((self.u, self.v, self.p, self.rho, self.z))


def as_array(U) -> np.ndarray:
    """Coerce a State or length-5 sequence to a fresh float array."""
    if isinstance(U, State):
        return U.as_array()
    a = np.array(U, dtype=float)
    if a.shape != (5,):
        raise ValueError(f"state must have 5 components, got shape {a.shape}")
    return a


def _check_thermo(p, rho):
    if not (p > 0.0 and rho > 0.0):
        raise DomainError(f"non-positive pressure or density (p={p}, rho={rho})")


def sound_speed(p: float, rho: float, g: GasModel) -> float:
    _check_thermo(p, rho)
    return math.sqrt(g.gamma * p / rho)


def temperature(p: float, rho: float, g: GasModel) -> float:
    _check_thermo(p, rho)
    return p / (g.R * rho)


def rate(T: float, g: GasModel) -> float:
    """Arrhenius rate ``T**mu * exp(-eact / (R T))``."""
    if not T > 0.0:
        raise DomainError(f"non-positive temperature {T}")
    return K.rate(T, g.R, g.mu, g.eact)


def check_supersonic(U, g: GasModel) -> np.ndarray:
    """Return U as an array, raising if it is not a valid supersonic state."""
    a = as_array(U)
    _check_thermo(a[2], a[3])
    c = math.sqrt(g.gamma * a[2] / a[3])
    if not (a[0] - c >= K.SONIC_TOL * c):
        raise SonicError(f"state is not supersonic (u={a[0]}, c={c})")
    return a


def eigenvalues(U, g: GasModel) -> np.ndarray:
    """Ordered characteristic slopes ``(lambda_1, v/u, v/u, v/u, lambda_5)``."""
    a = check_supersonic(U, g)
    mid = a[1] / a[0]
    return np.array([K.lam15(a, g.gamma, -1.0), mid, mid, mid, K.lam15(a, g.gamma, 1.0)])


def kappa(U, i: int, g: GasModel) -> float:
    """Normalization factor making ``kappa * rhat_i`` dot grad(lambda_i) equal 1."""
    a = check_supersonic(U, g)
    return K.kappa15(a, g.gamma, _sign(i))


def right_eigenvector(U, i: int, g: GasModel) -> np.ndarray:
    """Normalized right eigenvector r_i of family 1 or 5."""
    a = check_supersonic(U, g)
    out = np.empty(5)
    K.r15(a, g.gamma, _sign(i), out)
    return out


def entropy(U, g: GasModel) -> float:
    """Specific entropy ``cv * ln(p * rho**-gamma)``."""
    a = as_array(U)
    _check_thermo(a[2], a[3])
    return g.cv * math.log(a[2] * a[3] ** (-g.gamma))


def fluxes(U, g: GasModel):
    """Flux vectors ``(W, H, G)`` in x, in y, and the reaction source."""
    u, v, p, rho, z = as_array(U)
    _check_thermo(p, rho)
    enth = 0.5 * (u * u + v * v) + g.gamma * p / ((g.gamma - 1.0) * rho)
    W = np.array([rho * u, rho * u * u + p, rho * u * v, rho * u * enth, rho * u * z])
    H = np.array([rho * v, rho * u * v, rho * v * v + p, rho * v * enth, rho * v * z])
    src = rho * K.rate(p / (g.R * rho), g.R, g.mu, g.eact) * z
    G = np.array([0.0, 0.0, 0.0, g.q0 * src, -src])
    return W, H, G


def _sign(i: int) -> float:
    if i == 1:
        return -1.0
    if i == 5:
        return 1.0
    raise ValueError(f"family must be 1 or 5, got {i}")
