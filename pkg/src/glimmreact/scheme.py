"""Fractional-step Glimm scheme with a tracked strong contact.

Mesh conventions
----------------
Column k sits at ``x = k h`` with wall ordinate ``y_k``. Its cells are
indexed ``j = 0 .. M-1`` from the wall downward; cell ``j`` covers
``(y_k - 2(j+1)s, y_k - 2js)``. Diamond 0 is the wall diamond centred at
the corner ``(kh, y_k)``. Diamond ``d >= 1`` is centred at
``(kh, y_k - 2ds)``, the interface between cell ``d-1`` (above) and cell
``d`` (below). The bottom cell is held at the far-field state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels as K
from .errors import (
    ConfigError,
    GlimmError,
    RangeError,
    raise_for_status,
)
from .gas import GasModel, State, as_array, check_supersonic

THETA_SOURCES = ("van-der-corput", "pseudorandom")


# ---------------------------------------------------------------- wall

@dataclass(frozen=True)
class WallPolyline:
    """Wall sampled at ``x_k = k h``.

    Attributes
    ----------
    h : float
        Column spacing.
    x, y : ndarray, shape (N+1,)
        Vertices ``(k h, g(k h))``.
    seg_angle : ndarray, shape (N,)
        Inclination of segment ``k -> k+1``.
    """

    h: float
    x: np.ndarray
    y: np.ndarray
    seg_angle: np.ndarray

    @property
    def corner_turns(self) -> np.ndarray:
        """Turn at each vertex ``k = 0 .. N-1``, taking the incoming angle at 0 as 0."""
        prev = np.concatenate(([0.0], self.seg_angle[:-1]))
        return self.seg_angle - prev

    @property
    def normals(self) -> np.ndarray:
        return np.stack([-np.sin(self.seg_angle), np.cos(self.seg_angle)], axis=1)

    @property
    def total_turn(self) -> float:
        return float(np.abs(self.corner_turns).sum())

    def y_at(self, x) -> np.ndarray:
        return np.interp(x, self.x, self.y)


def _wall_function(g_spec) -> Callable[[np.ndarray], np.ndarray]:
    if g_spec is None:
        return lambda x: np.zeros_like(np.asarray(x, dtype=float))
    if callable(g_spec):
        return lambda x: np.asarray(g_spec(np.asarray(x, dtype=float)), dtype=float)
    verts = np.asarray(g_spec, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 1:
        raise ConfigError("wall vertices must be a list of (x, y) pairs")
    if np.any(np.diff(verts[:, 0]) <= 0.0):
        raise ConfigError("wall vertex abscissae must increase")
    return lambda x: np.interp(x, verts[:, 0], verts[:, 1])


def build_wall(g_spec, h: float, x_max: float, delta0: float | None = None) -> WallPolyline:
    """Sample the wall at ``x = k h`` for ``k = 0 .. ceil(x_max / h)``.

    ``g_spec`` is a callable ``g(x)``, a list of ``(x, y)`` vertices joined
    linearly and continued flat, or None for a straight wall.

    Raises
    ------
    ConfigError
        If ``g(0) != 0`` or the total turning reaches ``delta0``.
    """
    if not h > 0.0:
        raise ConfigError("h must be positive")
    n = int(round(x_max / h))
    if n < 1:
        raise ConfigError("x_max must be at least one step")
    g = _wall_function(g_spec)
    x = h * np.arange(n + 2)
    y = g(x)
    if abs(y[0]) > 1e-14:
        raise ConfigError(f"wall must start at g(0) = 0, got {y[0]}")
    y = y - y[0]
    seg = np.arctan(np.diff(y) / h)
    wall = WallPolyline(h, x, y, seg)
    if delta0 is not None:
        if wall.total_turn >= delta0:
            raise ConfigError(f"wall turning {wall.total_turn:.4g} is not below delta0 = {delta0}")
        if np.max(np.abs(seg)) >= delta0:
            raise ConfigError(f"wall slope exceeds delta0 = {delta0}")
    return wall


# ---------------------------------------------------------------- data

@dataclass(frozen=True)
class PiecewiseData:
    """Piecewise-constant profile from the top down.

    ``pieces[i] = (y_top, state)`` holds on ``(y_top[i+1], y_top[i])``;
    the last piece extends to the bottom of the layer.
    """

    pieces: tuple

    def __post_init__(self):
        tops = [float(p[0]) for p in self.pieces]
        if len(tops) == 0:
            raise ConfigError("a profile needs at least one piece")
        if any(b >= a for a, b in zip(tops, tops[1:])):
            raise ConfigError("piece tops must decrease")

    @classmethod
    def constant(cls, y_top: float, U) -> "PiecewiseData":
        return cls(((float(y_top), _state(U)),))

    @property
    def states(self) -> list[State]:
        return [p[1] for p in self.pieces]

    @property
    def tops(self) -> np.ndarray:
        return np.array([p[0] for p in self.pieces], dtype=float)

    def average(self, lo: float, hi: float) -> np.ndarray:
        """Exact mean of the primitive variables over ``(lo, hi)`` clipped to the layer."""
        tops = self.tops
        bots = np.append(tops[1:], -math.inf)
        acc = np.zeros(5)
        width = 0.0
        for t, b, (_, st) in zip(tops, bots, self.pieces):
            w = min(hi, t) - max(lo, b)
            if w > 0.0:
                acc += w * st.as_array()
                width += w
        if width <= 0.0:
            raise RangeError(f"interval ({lo}, {hi}) misses the profile")
        return acc / width

    def total_variation(self) -> float:
        a = np.array([s.as_array() for s in self.states])
        return float(np.abs(np.diff(a, axis=0)).sum()) if len(a) > 1 else 0.0

    def sup_deviation(self, U) -> float:
        ref = as_array(U)
        return max(float(np.abs(s.as_array() - ref).max()) for s in self.states)


def _state(U) -> State:
    return U if isinstance(U, State) else State.from_array(as_array(U))


@dataclass(frozen=True)
class SchemeConfig:
    """Inputs of one Glimm run.

    Attributes
    ----------
    gas : GasModel
    h : float
        Column spacing.
    x_max : float
        Extent of the run; the last column is ``round(x_max / h)``.
    y0 : float
        Initial contact ordinate, negative.
    upper, lower : PiecewiseData
        Initial data above and below ``y0``. ``upper`` starts at 0 and
        ``lower`` at ``y0``; the last lower piece is the far field.
    background_upper, background_lower : State
        Reference states for the confinement checks and diagnostics.
    wall : callable, vertex list or None
        Wall shape ``g`` with ``g(0) = 0``.
    delta0 : float or None
        Admissible wall turning; None skips the check.
    cfl_ratio : float or None
        ``s / h``; None uses ``cfl_factor`` times the characteristic bound.
    cfl_factor : float
        Safety factor on the characteristic bound.
    theta_source : str
        ``van-der-corput`` or ``pseudorandom``.
    seed : int
        Start offset of the low-discrepancy sequence, or the RNG seed.
    y_min : float or None
        Truncation depth; None picks one below the domain of dependence.
    eps : float
        Radius (max norm) of the balls around the backgrounds every cell
        must stay in.
    keep_fans : bool
        Retain wave strengths and speeds for diagnostics.
    keep_fan_states : bool
        Also retain the constant states inside every fan.
    """

    gas: GasModel
    h: float
    x_max: float
    y0: float
    upper: PiecewiseData
    lower: PiecewiseData
    background_upper: State
    background_lower: State
    wall: object = None
    delta0: float | None = None
    cfl_ratio: float | None = None
    cfl_factor: float = 1.25
    theta_source: str = "van-der-corput"
    seed: int = 0
    y_min: float | None = None
    eps: float = 0.3
    keep_fans: bool = True
    keep_fan_states: bool = False

    def __post_init__(self):
        if not self.h > 0.0 or not self.x_max > 0.0:
            raise ConfigError("h and x_max must be positive")
        if not self.y0 < 0.0:
            raise ConfigError("y0 must be negative")
        if self.theta_source not in THETA_SOURCES:
            raise ConfigError(f"theta_source must be one of {THETA_SOURCES}")
        if abs(self.upper.tops[0]) > 0.0:
            raise ConfigError("upper profile must start at y = 0")
        if self.lower.tops[0] != self.y0:
            raise ConfigError("lower profile must start at y0")
        if self.upper.tops[-1] < self.y0:
            raise ConfigError("upper profile pieces must lie above y0")


# ---------------------------------------------------------------- theta

def van_der_corput(n: int, base: int = 2) -> float:
    v = 0.0
    denom = 1.0
    while n > 0:
        n, r = divmod(n, base)
        denom *= base
        v += r / denom
    return v


def theta_sequence(n: int, source: str = "van-der-corput", seed: int = 0) -> np.ndarray:
    """Offsets in (-1, 1) for columns ``0 .. n-1``."""
    if source == "van-der-corput":
        return np.array([2.0 * van_der_corput(k + 1 + seed) - 1.0 for k in range(n)])
    if source == "pseudorandom":
        rng = np.random.default_rng(seed)
        th = rng.uniform(-1.0, 1.0, n)
        th[th == -1.0] = 0.0
        return th
    raise ConfigError(f"unknown theta source {source!r}")


def sample_points(y_wall: float, s: float, theta: float, m: int) -> np.ndarray:
    """Sample ordinates ``y_wall + (2n + 1 + theta) s`` for ``n = -1 .. -m``."""
    n = -1 - np.arange(m)
    return y_wall + (2.0 * n + 1.0 + theta) * s


# ---------------------------------------------------------------- field

@dataclass
class ColumnFans:
    """Wave fans of all diamonds centred on one column."""

    kinds: np.ndarray
    strengths: np.ndarray
    speeds: np.ndarray
    centers: np.ndarray
    contact_diamond: int
    states: np.ndarray | None = None
    iterations: np.ndarray | None = None


@dataclass
class MeshColumn:
    """States on column k.

    Attributes
    ----------
    k : int
    x : float
    y_wall : float
    s : float
        Half cell height.
    sampled : ndarray, shape (M, 5)
        Glimm samples before the reaction step (the ``kh-`` states).
    cells : ndarray, shape (M, 5)
        States after the reaction step (the ``kh+`` states).
    contact_index : int
        First cell below the strong contact; the contact sits on the
        interface between cells ``contact_index - 1`` and ``contact_index``.
    contact_y : float
        Tracked contact ordinate.
    fans : ColumnFans or None
        Fans solved from ``cells``; None on the last column or when fans
        are not retained.
    """

    k: int
    x: float
    y_wall: float
    s: float
    sampled: np.ndarray
    cells: np.ndarray
    contact_index: int
    contact_y: float
    fans: ColumnFans | None = None
    wall_state: np.ndarray | None = None
    contact_state: np.ndarray | None = None
    contact_slope: float = math.nan

    @property
    def y_hi(self) -> np.ndarray:
        return self.y_wall - 2.0 * self.s * np.arange(len(self.cells))

    @property
    def y_lo(self) -> np.ndarray:
        return self.y_hi - 2.0 * self.s

    @property
    def contact_interface(self) -> float:
        """Ordinate of the cell interface carrying the strong contact."""
        return self.y_wall - 2.0 * self.s * self.contact_index


@dataclass
class SolutionField:
    """Append-only record of a run."""

    cfg: SchemeConfig
    wall: WallPolyline
    s: float
    thetas: np.ndarray
    farfield: np.ndarray
    columns: list = field(default_factory=list)
    error: str | None = None

    @property
    def h(self) -> float:
        return self.cfg.h

    @property
    def n_cells(self) -> int:
        return len(self.columns[0].cells)

    @property
    def contact_path(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.array([c.x for c in self.columns])
        chi = np.array([c.contact_y for c in self.columns])
        return x, chi


# ---------------------------------------------------------------- setup

def characteristic_bound(cfg: SchemeConfig) -> float:
    """Largest |lambda_1|, |lambda_5| over the initial states."""
    g = cfg.gas
    lam = 0.0
    for U in cfg.upper.states + cfg.lower.states:
        a = check_supersonic(U, g)
        lam = max(lam, abs(K.lam15(a, g.gamma, -1.0)), abs(K.lam15(a, g.gamma, 1.0)))
    return lam


def mesh_geometry(cfg: SchemeConfig, wall: WallPolyline) -> tuple[float, int, int]:
    """Return ``(s, N, M)``: half cell height, contact cell index, cell count."""
    h = cfg.h
    m = float(np.max(np.abs(np.diff(wall.y)))) / h
    bound = characteristic_bound(cfg) + m
    ratio = cfg.cfl_factor * bound if cfg.cfl_ratio is None else cfg.cfl_ratio
    if not ratio > bound:
        raise ConfigError(f"s/h = {ratio:.4g} violates the CFL bound {bound:.4g}")
    s_min = ratio * h
    N = int(math.floor(abs(cfg.y0) / (2.0 * s_min)))
    if N < 1:
        raise ConfigError("y0 is shallower than one cell; reduce h")
    s = abs(cfg.y0) / (2.0 * N)
    n_col = int(round(cfg.x_max / h))
    depth = (s / h) * cfg.x_max + 4.0 * s
    y_min = cfg.y0 - depth if cfg.y_min is None else cfg.y_min
    if y_min > cfg.y0 - depth:
        raise ConfigError(f"y_min = {y_min} is above the domain of dependence {cfg.y0 - depth}")
    lift = float(np.max(wall.y[: n_col + 1]))
    M = int(math.ceil((lift - y_min) / (2.0 * s))) + 1
    return s, N, M


def initial_column(cfg: SchemeConfig, s: float, N: int, M: int) -> np.ndarray:
    """Exact cell averages of the initial data."""
    cells = np.empty((M, 5))
    for j in range(M):
        hi = -2.0 * j * s
        lo = hi - 2.0 * s
        prof = cfg.upper if j < N else cfg.lower
        cells[j] = prof.average(lo, hi)
    return cells


def _check_confinement(cells, jc, cfg: SchemeConfig, k: int):
    up = cfg.background_upper.as_array()
    lo = cfg.background_lower.as_array()
    du = np.abs(cells[:jc] - up).max(axis=1) if jc > 0 else np.zeros(0)
    dl = np.abs(cells[jc:] - lo).max(axis=1)
    if du.size and du.max() > cfg.eps:
        j = int(np.argmax(du))
        raise RangeError(f"column {k}, cell {j}: state left the ball around the upper background")
    if dl.size and dl.max() > cfg.eps:
        j = jc + int(np.argmax(dl))
        raise RangeError(f"column {k}, cell {j}: state left the ball around the lower background")


# ---------------------------------------------------------------- stepping

def react_column(sampled: np.ndarray, h: float, g: GasModel, k: int = -1) -> np.ndarray:
    """Apply the reaction step to every cell of a column."""
    out = np.empty_like(sampled)
    fac = np.empty(len(sampled))
    st, j = K.react_cells(sampled, h, g.gamma, g.R, g.q0, g.mu, g.eact, out, fac)
    raise_for_status(st, f"reaction step failed at column {k}, cell {j}")
    return out


def solve_fans(cells: np.ndarray, jc: int, wall: WallPolyline, k: int, s: float,
               g: GasModel) -> ColumnFans:
    """Solve every diamond centred on column k."""
    M = len(cells)
    h = wall.h
    kinds = np.empty(M, dtype=np.int64)
    strengths = np.empty((M, 5))
    states = np.empty((M, 6, 5))
    speeds = np.empty((M, 5))
    iters = np.empty(M, dtype=np.int64)
    dy = wall.y[k + 1] - wall.y[k]
    st, d = K.solve_column(cells, jc, wall.seg_angle[k], dy, s, h, g.gamma,
                           kinds, strengths, states, speeds, iters)
    if st != K.OK:
        where = "wall diamond" if d == 0 else f"diamond {d}"
        raise_for_status(st, f"column {k}, {where}")
    centers = wall.y[k] - 2.0 * s * np.arange(M)
    return ColumnFans(kinds, strengths, speeds, centers, jc, states, iters)


def advance_column(col: MeshColumn, theta: float, wall: WallPolyline, cfg: SchemeConfig,
                   farfield: np.ndarray) -> tuple[ColumnFans, MeshColumn]:
    """One slab: solve the fans of column k and sample column k+1.

    ``col.cells`` must already hold the reacted ``kh+`` states. The new
    column carries sampled and reacted states.
    """
    g = cfg.gas
    k = col.k
    s = col.s
    fans = solve_fans(col.cells, col.contact_index, wall, k, s, g)
    M = len(col.cells)
    new = np.empty((M, 5))
    upper = np.empty(M, dtype=np.bool_)
    st, jn = K.sample_column(fans.kinds, fans.strengths, fans.states, fans.speeds,
                             fans.centers, fans.contact_diamond, wall.y[k + 1], s, cfg.h,
                             float(theta), g.gamma, farfield, new, upper)
    raise_for_status(st, f"sampling column {k + 1}")
    slope = fans.speeds[fans.contact_diamond, 2]
    chi = col.contact_y + cfg.h * slope
    reacted = react_column(new, cfg.h, g, k + 1)
    nxt = MeshColumn(k + 1, (k + 1) * cfg.h, float(wall.y[k + 1]), s, new, reacted, int(jn), chi)
    return fans, nxt


def _store_fans(fans: ColumnFans, cfg: SchemeConfig) -> ColumnFans | None:
    if not cfg.keep_fans:
        return None
    if not cfg.keep_fan_states:
        fans.states = None
    return fans


def run(cfg: SchemeConfig, raise_on_error: bool = True) -> SolutionField:
    """March the scheme from ``x = 0`` to ``x_max``.

    On a solver failure the partial field is attached to the exception as
    ``exc.field`` (or returned with ``field.error`` set when
    ``raise_on_error`` is False).
    """
    g = cfg.gas
    wall = build_wall(cfg.wall, cfg.h, cfg.x_max, cfg.delta0)
    s, N, M = mesh_geometry(cfg, wall)
    n_col = int(round(cfg.x_max / cfg.h))
    thetas = theta_sequence(n_col, cfg.theta_source, cfg.seed)
    farfield = cfg.lower.states[-1].as_array()
    for U in cfg.upper.states + cfg.lower.states:
        check_supersonic(U, g)
    fld = SolutionField(cfg, wall, s, thetas, farfield)
    sampled = initial_column(cfg, s, N, M)
    col = MeshColumn(0, 0.0, 0.0, s, sampled, react_column(sampled, cfg.h, g, 0), N, cfg.y0)
    try:
        _check_confinement(col.sampled, N, cfg, 0)
        for k in range(n_col):
            fans, nxt = advance_column(col, thetas[k], wall, cfg, farfield)
            jc = fans.contact_diamond
            col.wall_state = fans.states[0, 1].copy()
            col.contact_state = fans.states[jc, 1].copy()
            col.contact_slope = float(fans.speeds[jc, 2])
            col.fans = _store_fans(fans, cfg)
            fld.columns.append(col)
            _check_confinement(nxt.sampled, nxt.contact_index, cfg, k + 1)
            col = nxt
        fld.columns.append(col)
    except GlimmError as exc:
        if col not in fld.columns:
            fld.columns.append(col)
        fld.error = f"{type(exc).__name__}: {exc}"
        if raise_on_error:
            exc.field = fld
            raise
    return fld
