"""Reference configurations used by the tests, scripts and CLI presets."""

from __future__ import annotations

import math

import numpy as np

from .gas import GasModel, State
from .scheme import PiecewiseData, SchemeConfig

U1_BACKGROUND = State(2.0, 0.0, 1.0, 1.0, 0.0)
U2_BACKGROUND = State(2.4, 0.0, 1.0, 0.8, 0.0)
Y0 = -0.5

# unit perturbation shapes (du, dv, dp, drho, dZ) for the layered data
_UPPER_TOPS = (0.0, -0.125, -0.25, -0.375)
_UPPER_SHAPE = np.array([
    [0.5, 0.0, 0.5, 0.4, 1.0],
    [-0.3, 0.0, 0.2, -0.2, 0.6],
    [0.2, 0.0, -0.3, 0.3, 0.8],
    [0.0, 0.0, 0.1, -0.1, 0.4],
])
_LOWER_TOPS = (Y0, -0.8, -1.1)
_LOWER_SHAPE = np.array([
    [0.2, 0.0, 0.2, -0.2, 0.2],
    [-0.1, 0.0, 0.1, 0.1, 0.1],
    [0.0, 0.0, 0.0, 0.0, 0.0],
])
_WALL_AMPLITUDE = 1.0


def default_gas(reacting: bool = True) -> GasModel:
    return GasModel(gamma=1.4, R=1.0, q0=1.0, mu=1.0, eact=1.0 if reacting else 0.0)


def wall_bump(a: float):
    """Wall with slope ``a (1 - cos 2 pi x) / 2`` on [0, 1] and flat beyond.

    The slope starts at zero and its total variation is ``2 a``.
    """

    def g(x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, 0.0, 1.0)
        return 0.5 * a * (xc - np.sin(2.0 * math.pi * xc) / (2.0 * math.pi))

    return g


def _layered(tops, base: State, shape: np.ndarray, amp: float) -> PiecewiseData:
    b = base.as_array()
    return PiecewiseData(tuple((t, State.from_array(b + amp * d)) for t, d in zip(tops, shape)))


def _tv(shape: np.ndarray) -> float:
    return float(np.abs(np.diff(shape, axis=0)).sum())


def unit_delta_star() -> float:
    """delta_* of the unit-amplitude perturbation."""
    wall_tv = 2.0 * _WALL_AMPLITUDE
    sup = float(np.abs(_UPPER_SHAPE).max())
    return wall_tv + _tv(_UPPER_SHAPE) + _tv(_LOWER_SHAPE) + sup


def background_config(h: float = 0.01, x_max: float = 1.0, **kw) -> SchemeConfig:
    """Flat wall, two constant states with matched pressure, no reactant.

    Keyword arguments override any SchemeConfig field.
    """
    args = dict(
        gas=default_gas(False), y0=Y0,
        upper=PiecewiseData.constant(0.0, U2_BACKGROUND),
        lower=PiecewiseData.constant(Y0, U1_BACKGROUND),
        background_upper=U2_BACKGROUND, background_lower=U1_BACKGROUND, wall=None)
    args.update(kw)
    return SchemeConfig(h=h, x_max=x_max, **args)


def perturbed_config(delta: float, h: float, x_max: float = 1.0, reacting: bool = True,
                     **kw) -> SchemeConfig:
    """Layered perturbation of the background with aggregate size ``delta``.

    Wall slope, both initial profiles and the upper-layer deviation (including
    the reactant) all scale linearly with ``delta``, so that
    :func:`delta_star` of the result equals ``delta``. With ``reacting``
    False the reactant is removed.
    """
    amp = delta / unit_delta_star()
    upper_shape = _UPPER_SHAPE.copy()
    lower_shape = _LOWER_SHAPE.copy()
    if not reacting:
        upper_shape[:, 4] = 0.0
        lower_shape[:, 4] = 0.0
    return SchemeConfig(
        gas=kw.pop("gas", default_gas(reacting)), h=h, x_max=x_max, y0=Y0,
        upper=_layered(_UPPER_TOPS, U2_BACKGROUND, upper_shape, amp),
        lower=_layered(_LOWER_TOPS, U1_BACKGROUND, lower_shape, amp),
        background_upper=U2_BACKGROUND, background_lower=U1_BACKGROUND,
        wall=wall_bump(_WALL_AMPLITUDE * amp), delta0=kw.pop("delta0", 0.5), **kw)


def delta_star(cfg: SchemeConfig, x_max: float | None = None) -> float:
    """Aggregate perturbation size: wall-slope TV, both data TVs and the upper sup deviation.

    Total variations sum the absolute jumps of all five primitive
    components; the sup deviation is the largest component deviation.
    """
    from .scheme import build_wall

    x_max = cfg.x_max if x_max is None else x_max
    wall = build_wall(cfg.wall, cfg.h, x_max)
    slope = np.diff(wall.y) / cfg.h
    wall_tv = float(np.abs(np.diff(slope)).sum()) + abs(slope[0])
    return (wall_tv + cfg.upper.total_variation() + cfg.lower.total_variation()
            + cfg.upper.sup_deviation(cfg.background_upper))
