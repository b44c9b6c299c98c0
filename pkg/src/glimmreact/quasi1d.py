"""Quasi-one-dimensional duct model, 2D field averaging and the comparison harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConfigError, GridMismatch, MaxIterations, NoContraction, RangeError,
                     SonicError)
from .gas import GasModel
from .scheme import SolutionField

CONTRACTION_LIMIT = 0.9
CONTRACTION_STRIKES = 3


@dataclass(frozen=True)
class DuctGeometry:
    """Cross-section ``A(x)`` sampled on a uniform grid ``x``; A is taken piecewise linear."""

    x: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        A = np.asarray(self.A, dtype=float)
        if x.ndim != 1 or x.shape != A.shape or len(x) < 2:
            raise ConfigError("x and A must be matching 1-D arrays with at least two nodes")
        dx = np.diff(x)
        if np.any(dx <= 0.0) or not np.allclose(dx, dx[0], rtol=1e-9, atol=0.0):
            raise ConfigError("duct grid must be uniform and increasing")
        if not np.all(A > 0.0):
            raise ConfigError("cross-section must be positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "A", A)

    @classmethod
    def from_function(cls, A, x_max: float, dx: float) -> "DuctGeometry":
        n = int(round(x_max / dx))
        x = dx * np.arange(n + 1)
        return cls(x, np.asarray(A(x), dtype=float))

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def total_variation(self) -> float:
        """``int |A'|`` of the piecewise-linear section."""
        return float(np.abs(np.diff(self.A)).sum())


@dataclass(frozen=True)
class Quasi1DSolution:
    """Converged duct flow.

    Attributes
    ----------
    x, rho, u, p, Z : ndarray
        Node values.
    iterations : int
        Number of iterations performed.
    update : float
        Sup-norm change of the last iteration.
    updates : ndarray
        Sup-norm change of every iteration.
    ratios : ndarray
        ``updates[n] / updates[n-1]``.
    C_lo, C_hi : float
        Bounds of ``A rho phi(T) / (rho0 u0 A0)`` on the converged iterate;
        ``Z0 exp(-C_hi x) <= Z <= Z0 exp(-C_lo x)``.
    """

    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    p: np.ndarray
    Z: np.ndarray
    iterations: int
    update: float
    updates: np.ndarray = field(repr=False)
    ratios: np.ndarray = field(repr=False)
    C_lo: float = math.nan
    C_hi: float = math.nan

    def envelopes(self) -> tuple[np.ndarray, np.ndarray]:
        z0 = self.Z[0]
        return z0 * np.exp(-self.C_hi * self.x), z0 * np.exp(-self.C_lo * self.x)

    def as_array(self) -> np.ndarray:
        return np.stack([self.rho, self.u, self.p, self.Z], axis=1)


def _cumtrapz(f: np.ndarray, dx: float) -> np.ndarray:
    out = np.zeros_like(f)
    out[1:] = np.cumsum(0.5 * dx * (f[1:] + f[:-1]))
    return out


def _rate(T: np.ndarray, g: GasModel) -> np.ndarray:
    return T ** g.mu * np.exp(-g.eact / (g.R * T))


def solve_q1d(geom: DuctGeometry, U0, g: GasModel, tol: float = 1e-12,
              max_iter: int = 100) -> Quasi1DSolution:
    """Fixed-point iteration for the steady duct equations.

    ``U0 = (rho, u, p, Z)`` at the inlet. Each iteration freezes the
    pressure-area and heat-release integrals at the previous iterate,
    recovers ``u`` from the supersonic root of the momentum/energy
    quadratic with ``rho u A`` fixed, then updates ``Z`` through its
    exponential closed form. Iteration 0 is the constant inlet state.

    Raises
    ------
    SonicError
        If the quadratic has no supersonic root at some node.
    NoContraction
        If the update ratio exceeds 0.9 on three consecutive iterations.
    MaxIterations
        If ``tol`` is not reached within ``max_iter`` iterations.
    """
    rho0, u0, p0, z0 = (float(v) for v in U0)
    gam = g.gamma
    if not (rho0 > 0.0 and p0 > 0.0 and u0 > math.sqrt(gam * p0 / rho0)):
        raise SonicError("inlet state is not supersonic")
    x, A = geom.x, geom.A
    dx = geom.dx
    A0 = A[0]
    m = rho0 * u0 * A0
    B0 = gam * p0 / ((gam - 1.0) * rho0) + 0.5 * u0 * u0
    n = len(x)
    rho = np.full(n, rho0)
    u = np.full(n, u0)
    p = np.full(n, p0)
    Z = np.full(n, z0)
    dA = np.diff(A)
    updates, ratios = [], []
    strikes = 0
    for it in range(1, max_iter + 1):
        Ip = np.zeros(n)
        Ip[1:] = np.cumsum(dA * 0.5 * (p[1:] + p[:-1]))
        T = p / (g.R * rho)
        heat = _cumtrapz(A * rho * _rate(T, g) * Z, dx)
        Mx = u0 + (A0 * p0 + Ip) / m
        B = B0 + g.q0 * heat / m
        disc = (gam * Mx) ** 2 - 2.0 * (gam * gam - 1.0) * B
        if np.any(disc < 0.0):
            j = int(np.argmax(disc < 0.0))
            raise SonicError(f"no real root at x={x[j]:.6g} in iteration {it}")
        un = (gam * Mx + np.sqrt(disc)) / (gam + 1.0)
        jflux = m / A
        rn = jflux / un
        pn = jflux * (Mx - un)
        if np.any(pn <= 0.0) or np.any(un * un <= gam * pn / rn):
            j = int(np.argmax((pn <= 0.0) | (un * un <= gam * pn / rn)))
            raise SonicError(f"subsonic or non-physical node at x={x[j]:.6g}")
        Tn = pn / (g.R * rn)
        Zn = z0 * np.exp(-_cumtrapz(A * rn * _rate(Tn, g), dx) / m)
        upd = float(max(np.abs(rn - rho).max(), np.abs(un - u).max(),
                        np.abs(pn - p).max(), np.abs(Zn - Z).max()))
        rho, u, p, Z = rn, un, pn, Zn
        if updates and updates[-1] > 0.0:
            r = upd / updates[-1]
            ratios.append(r)
            strikes = strikes + 1 if r > CONTRACTION_LIMIT else 0
        updates.append(upd)
        if upd <= tol * max(1.0, float(np.abs(u).max())):
            break
        if strikes >= CONTRACTION_STRIKES:
            raise NoContraction(f"update ratio above {CONTRACTION_LIMIT} for "
                                f"{CONTRACTION_STRIKES} iterations")
    else:
        raise MaxIterations(f"update {updates[-1]:.3e} after {max_iter} iterations")
    f = A * rho * _rate(p / (g.R * rho), g) / m
    return Quasi1DSolution(x, rho, u, p, Z, it, updates[-1], np.array(updates),
                           np.array(ratios), float(f.min()), float(f.max()))


# ---------------------------------------------------------------- averaging

def _column_at(fld: SolutionField, x: float):
    k = int(round(x / fld.h))
    if k < 0 or k >= len(fld.columns) or abs(k * fld.h - x) > 1e-9 * max(1.0, abs(x)):
        raise RangeError(f"x={x} is not a computed column")
    return fld.columns[k]


LAYERS = ("tracked", "mesh")


def average_field(fld: SolutionField, x: float, layer: str = "tracked") -> tuple[np.ndarray, float]:
    """Exact average of the upper layer on the column at ``x``.

    Averages the piecewise-constant ``kh-`` states and returns
    ``(rho, u, p, Z)`` with the cross-section ``A = g_h(x) - chi(x)``
    measured to the tracked contact. With ``layer="tracked"`` the average
    runs over ``[chi(x), g_h(x)]``, so cells below the mesh interface that
    lie above ``chi`` contribute their share. With ``layer="mesh"`` it runs
    over the cells above the mesh interface carrying the contact.
    """
    col = _column_at(fld, x)
    A = col.y_wall - col.contact_y
    if layer == "tracked":
        hi = np.minimum(col.y_hi, col.y_wall)
        lo = np.maximum(col.y_lo, col.contact_y)
        w = np.clip(hi - lo, 0.0, None)
        if not A > 0.0:
            raise RangeError(f"empty upper layer at x={x}")
        mean = w @ col.sampled / w.sum()
    elif layer == "mesh":
        jc = col.contact_index
        if jc == 0:
            raise RangeError(f"empty upper layer at x={x}")
        mean = col.sampled[:jc].mean(axis=0)
    else:
        raise ConfigError(f"layer must be one of {LAYERS}")
    return mean[[3, 0, 2, 4]], float(A)


def geometry_from_field(fld: SolutionField) -> DuctGeometry:
    """Wall-to-contact distance on a grid of spacing ``h/2``, linear between columns."""
    xs = np.array([c.x for c in fld.columns])
    As = np.array([c.y_wall - c.contact_y for c in fld.columns])
    x = 0.5 * fld.h * np.arange(2 * (len(xs) - 1) + 1)
    return DuctGeometry(x, np.interp(x, xs, As))


def inlet_state(fld: SolutionField) -> np.ndarray:
    """Exact average ``(rho, u, p, Z)`` of the upper initial data over the inlet section."""
    cfg = fld.cfg
    top = fld.columns[0].y_wall
    avg = cfg.upper.average(cfg.y0, top)
    return avg[[3, 0, 2, 4]]


@dataclass(frozen=True)
class Comparison:
    """Per-column differences ``|U_bar - U_A|`` for ``(rho, u, p, Z)``."""

    x: np.ndarray
    A: np.ndarray
    averaged: np.ndarray
    duct: np.ndarray
    diff: np.ndarray

    @property
    def max_abs_diff(self) -> np.ndarray:
        return self.diff.max(axis=1)

    @property
    def sup(self) -> float:
        return float(self.diff.max()) if self.diff.size else 0.0


def compare(fld: SolutionField, q1d: Quasi1DSolution, layer: str = "tracked") -> Comparison:
    """Averaged 2D field against the duct solution at every column."""
    xs, As, avg, duct = [], [], [], []
    dxq = q1d.x[1] - q1d.x[0]
    for col in fld.columns:
        i = int(round(col.x / dxq))
        if i >= len(q1d.x) or abs(q1d.x[i] - col.x) > 1e-9 * max(1.0, col.x):
            raise GridMismatch(f"duct grid has no node at x={col.x}")
        mean, A = average_field(fld, col.x, layer)
        xs.append(col.x)
        As.append(A)
        avg.append(mean)
        duct.append([q1d.rho[i], q1d.u[i], q1d.p[i], q1d.Z[i]])
    avg = np.array(avg)
    duct = np.array(duct)
    return Comparison(np.array(xs), np.array(As), avg, duct, np.abs(avg - duct))


def compare_run(fld: SolutionField, g: GasModel | None = None, tol: float = 1e-12,
                max_iter: int = 100, layer: str = "tracked") -> tuple[Quasi1DSolution, Comparison]:
    """Solve the duct problem extracted from ``fld`` and compare."""
    g = fld.cfg.gas if g is None else g
    q = solve_q1d(geometry_from_field(fld), inlet_state(fld), g, tol, max_iter)
    return q, compare(fld, q, layer)


# ---------------------------------------------------------------- scaling

@dataclass(frozen=True)
class ScalingResult:
    """Rows ``(delta_star, h, sup_diff)`` and the least-squares log-log slope."""

    rows: list
    exponent: float


def fit_exponent(deltas, errors) -> float:
    d = np.log(np.asarray(deltas, dtype=float))
    e = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(d, e, 1)[0])


def scaling_study(deltas, h: float, x_max: float = 1.0, make_config=None,
                  layer: str = "tracked", **cfg_kw) -> ScalingResult:
    """Run the 2D scheme and the duct model for each ``delta`` and fit the exponent.

    ``make_config(delta, h, x_max, **cfg_kw)`` builds the run; it defaults
    to the layered perturbation of the reference background.
    """
    from .cases import delta_star, perturbed_config
    from .scheme import run

    make_config = perturbed_config if make_config is None else make_config
    rows = []
    for d in deltas:
        cfg = make_config(d, h, x_max, **cfg_kw)
        fld = run(cfg)
        _, cmp = compare_run(fld, layer=layer)
        rows.append((delta_star(cfg), h, cmp.sup))
    exponent = fit_exponent([r[0] for r in rows], [r[2] for r in rows]) if len(rows) > 1 else math.nan
    return ScalingResult(rows, exponent)
