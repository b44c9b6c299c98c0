"""Runtime checks: total variation, Glimm functional, slab balances, entropy, probes."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import _kernels as K
from .errors import MissingWaveData
from .gas import GasModel, State, as_array, check_supersonic, kappa
from .riemann import solve_boundary, solve_strong_contact
from .scheme import MeshColumn, SolutionField
from .waves import compose, wave_curve

PROBE_STEP = 1e-4


# ---------------------------------------------------------------- total variation

def total_variation(column, which: str = "sampled") -> float:
    """Sum over cell interfaces of the absolute jumps of all five primitives.

    ``column`` is a MeshColumn (``which`` picks the sampled or reacted
    states) or an ``(M, 5)`` array.
    """
    cells = getattr(column, which) if isinstance(column, MeshColumn) else np.asarray(column)
    if len(cells) < 2:
        return 0.0
    return float(np.abs(np.diff(cells, axis=0)).sum())


# ---------------------------------------------------------------- probes

@dataclass(frozen=True)
class BoundaryCoefficients:
    K_b: float
    K_b0: float
    K_b2: float
    K_b3: float
    K_b5: float


def probe_boundary_coefficients(U, g: GasModel, omega_prev: float = 0.0,
                                step: float = PROBE_STEP) -> BoundaryCoefficients:
    """Finite-difference coefficients of the wall reflection.

    ``K_b`` is the derivative of the wall 1-wave with respect to the wall
    angle. ``K_bi`` (i = 2, 3, 5) measures how an i-wave arriving at the
    wall changes the reflected 1-wave, and ``K_b0`` the response to a
    corner turn.
    """
    a = check_supersonic(U, g)

    def gam1(state, omega):
        return solve_boundary(state, omega, g)[0]

    K_b = (gam1(a, omega_prev + step) - gam1(a, omega_prev - step)) / (2 * step)
    out = {}
    for i in (2, 3, 5):
        plus = gam1(wave_curve(i, step, a, g), omega_prev)
        minus = gam1(wave_curve(i, -step, a, g), omega_prev)
        # gamma_1 - beta_1 where beta_1 answers the previous segment
        out[i] = -(plus - minus) / (2 * step)
    # a corner turn acts on the reflected wave exactly like the wall angle
    K_b0 = K_b
    return BoundaryCoefficients(float(K_b), float(K_b0), float(out[2]), float(out[3]), float(out[5]))


def reflection_closed_form(U1, U2, g: GasModel) -> float:
    """Signed reflection coefficient of a 1-wave hitting the contact from above.

    ``(lam5(U1) - E lam5(U2)) / (lam5(U1) + E lam5(U2))`` with
    ``E = exp(2 sigma2 + sigma3)``.
    """
    a1 = check_supersonic(U1, g)
    a2 = check_supersonic(U2, g)
    E = (a2[0] / a1[0]) ** 2 * (a2[3] / a1[3])
    l1 = K.lam15(a1, g.gamma, 1.0)
    l2 = K.lam15(a2, g.gamma, 1.0)
    return float((l1 - E * l2) / (l1 + E * l2))


def _strong(Ua, Ub, g):
    return solve_strong_contact(Ua, Ub, g).strengths


def probe_from_above(U1, U2, g: GasModel, step: float = PROBE_STEP) -> tuple[float, float]:
    """``(K21, K25)``: transmitted 1-wave and reflected 5-wave per unit incoming 1-wave."""
    res = []
    for b in (step, -step):
        Ub = wave_curve(1, b, U2, g)
        res.append(_strong(U1, Ub, g))
    d = (res[0] - res[1]) / (2 * step)
    return float(d[0]), float(d[4])


def probe_from_below(U1, U2, g: GasModel, step: float = PROBE_STEP) -> tuple[float, float]:
    """``(K11, K15)``: reflected 1-wave and transmitted 5-wave per unit incoming 5-wave."""
    a1 = as_array(U1)
    a2 = as_array(U2)
    s2 = math.log(math.hypot(a2[0], a2[1]) / math.hypot(a1[0], a1[1]))
    s3 = math.log(a2[3] / a1[3])
    res = []
    for b in (step, -step):
        Um = wave_curve(5, b, a1, g)
        Ub = compose((0.0, s2, s3, a2[4] - a1[4], 0.0), Um, g)
        res.append(_strong(a1, Ub, g))
    d = (res[0] - res[1]) / (2 * step)
    return float(d[0]), float(d[4])


def probe_reflection(U1, U2, g: GasModel, step: float = PROBE_STEP) -> tuple[float, float]:
    """Numeric and closed-form reflection coefficient ``K25``."""
    return probe_from_above(U1, U2, g, step)[1], reflection_closed_form(U1, U2, g)


# ---------------------------------------------------------------- functional

@dataclass(frozen=True)
class FunctionalWeights:
    """Weights of the Glimm-type functional."""

    C1: float = 0.1
    C2: float = 1.0
    K11: float = 1.0
    K12: float = 10.0
    K13: float = 10.0
    K14: float = 2.0
    K15: float = 1.0
    K20: float = 1.0
    K22: float = 1.0
    K23: float = 1.0
    K24: float = 2.0
    K25: float = 1.5
    K: float = 100.0
    Kz: float = 100.0

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0.0:
                raise ValueError(f"weight {f.name} must be positive")

    def replace(self, **kw) -> "FunctionalWeights":
        vals = {f.name: getattr(self, f.name) for f in fields(self)}
        vals.update(kw)
        return FunctionalWeights(**vals)


@dataclass(frozen=True)
class ProbedCoefficients:
    K_b0: float
    K_b2: float
    K_b3: float
    K_b5: float
    K21: float
    K25: float
    K11: float
    K15: float

    def max_abs(self) -> float:
        return max(abs(getattr(self, f.name)) for f in fields(self))


def probe_coefficients(U1, U2, g: GasModel) -> ProbedCoefficients:
    b = probe_boundary_coefficients(U2, g)
    k21, k25 = probe_from_above(U1, U2, g)
    k11, k15 = probe_from_below(U1, U2, g)
    return ProbedCoefficients(b.K_b0, b.K_b2, b.K_b3, b.K_b5, k21, k25, k11, k15)


def default_weights(U1, U2, g: GasModel, **overrides) -> FunctionalWeights:
    """Weights satisfying the functional's consistency conditions at a background pair."""
    c = probe_coefficients(U1, U2, g)
    C2 = overrides.get("C2", 1.0)
    K25 = min(c.K_b5 + 0.5, 0.5 * (c.K_b5 + 1.0 / max(abs(c.K25), 1e-12)))
    K11 = 0.9 * (1.0 - K25 * abs(c.K25)) / max(abs(c.K21), 1e-12)
    K15 = max(1.0, 2.0 * (K25 * abs(c.K15) + K11 * abs(c.K11)))
    M = max(1.0, c.max_abs())
    w = FunctionalWeights(
        C1=0.1, C2=C2, K11=K11, K12=10.0, K13=10.0, K14=2.0 * C2, K15=K15,
        K20=max(1.0, 2.0 * abs(c.K_b0)), K22=1.0 + 2.0 * abs(c.K_b2),
        K23=1.0 + 2.0 * abs(c.K_b3), K24=2.0 * C2, K25=K25, K=100.0, Kz=100.0 * M * M)
    return w.replace(**overrides) if overrides else w


@dataclass(frozen=True)
class FunctionalSnapshot:
    k: int
    L_c: float
    L1: float
    L2: float
    L0: float
    Q: float
    F: float
    F_c: float


def _wave_lists(fans, sigma20: float, sigma30: float):
    """Per-diamond weak strengths (families 1, 2, 3, 4, 5) and strong-contact deviation."""
    kinds = fans.kinds
    st = fans.strengths
    jc = fans.contact_diamond
    weak = np.where((kinds != K.FAN_TRIVIAL)[:, None], st, 0.0).copy()
    weak[kinds == K.FAN_BOUNDARY, 1:] = 0.0
    contact = weak[jc].copy()
    weak[jc, 1:4] = 0.0
    strong = (abs(contact[1] - sigma20) + abs(contact[2] - sigma30), abs(contact[3]))
    return weak, strong


def interaction_potential(weak: np.ndarray) -> float:
    """Sum of |a||b| over approaching weak-wave pairs in different diamonds.

    Diamonds are ordered from the wall down. A wave of family i in a lower
    diamond approaches a family-j wave in a higher diamond when i > j, or
    when i = j in {1, 5} and at least one of the two is a shock. Family 4
    does not interact.
    """
    fam = (0, 1, 2, 4)
    above = np.zeros(5)
    above_shock = np.zeros(5)
    Q = 0.0
    for d in range(weak.shape[0]):
        w = weak[d]
        if not w.any():
            continue
        for i in fam:
            b = abs(w[i])
            if b == 0.0:
                continue
            lower = sum(above[j] for j in fam if j < i)
            Q += b * lower
            if i in (0, 4):
                Q += b * (above[i] if w[i] < 0.0 else above_shock[i])
        for i in fam:
            above[i] += abs(w[i])
            if w[i] < 0.0:
                above_shock[i] += abs(w[i])
    return Q


def decay_rate(field: SolutionField) -> float:
    """``l = min phi(T) / u`` over every sampled and reacted state of the run."""
    g = field.cfg.gas
    lo = math.inf
    for col in field.columns:
        for cells in (col.sampled, col.cells):
            T = cells[:, 2] / (g.R * cells[:, 3])
            phi = T ** g.mu * np.exp(-g.eact / (g.R * T))
            lo = min(lo, float((phi / cells[:, 0]).min()))
    return lo


def glimm_functional(field: SolutionField, k: int, w: FunctionalWeights,
                     l: float | None = None) -> FunctionalSnapshot:
    """Functional on the mesh curve through column k.

    Corner turns are counted for vertices strictly after column k and up to
    the last column of the run. The reaction tail is the full geometric
    series ``Kz sum_{j>k} exp(-l j h) h |Z0|``.
    """
    col = field.columns[k]
    if col.fans is None:
        raise MissingWaveData(f"column {k} carries no wave fans")
    cfg = field.cfg
    bu = cfg.background_upper.as_array()
    bl = cfg.background_lower.as_array()
    s20 = math.log(math.hypot(bu[0], bu[1]) / math.hypot(bl[0], bl[1]))
    s30 = math.log(bu[3] / bl[3])
    weak, (dsig, g4) = _wave_lists(col.fans, s20, s30)
    jc = col.fans.contact_diamond
    L_c = w.C1 * dsig + w.C2 * g4
    region2 = weak[:jc].copy()
    region1 = weak[jc + 1:].copy()
    contact = weak[jc]
    a1 = np.abs(region1).sum(axis=0) + np.array([abs(contact[0]), 0, 0, 0, 0])
    a2 = np.abs(region2).sum(axis=0) + np.array([0, 0, 0, 0, abs(contact[4])])
    n_col = len(field.columns) - 1
    turns = field.wall.corner_turns[k + 1:n_col]
    L0 = float(np.abs(turns).sum())
    L1 = w.K11 * a1[0] + w.K12 * a1[1] + w.K13 * a1[2] + w.K14 * a1[3] + w.K15 * a1[4]
    L2 = (w.K20 * L0 + a2[0] + w.K22 * a2[1] + w.K23 * a2[2] + w.K24 * a2[3]
          + w.K25 * a2[4])
    Q = interaction_potential(weak)
    F = L_c + L1 + L2 + w.K * Q
    if l is None:
        l = decay_rate(field)
    z0 = float(max(field.columns[0].sampled[:, 4].max(), 0.0))
    h = field.h
    q = math.exp(-l * h)
    tail = w.Kz * h * z0 * q ** (k + 1) / (1.0 - q) if z0 > 0.0 else 0.0
    return FunctionalSnapshot(k, float(L_c), float(L1), float(L2), L0, float(Q), float(F),
                              float(F + tail))


def functional_history(field: SolutionField, w: FunctionalWeights) -> list[FunctionalSnapshot]:
    l = decay_rate(field)
    return [glimm_functional(field, k, w, l) for k, c in enumerate(field.columns)
            if c.fans is not None]


# ---------------------------------------------------------------- slab balances

def _flux_columns(cells: np.ndarray, gam: float) -> np.ndarray:
    """Mass, x-momentum, energy and reactant fluxes of many states."""
    u, v, p, r, z = cells.T
    m = r * u
    enth = 0.5 * (u * u + v * v) + gam * p / ((gam - 1.0) * r)
    return np.stack([m, m * u + p, m * enth, m * z], axis=1)


def _layer_widths(col: MeshColumn) -> np.ndarray:
    """Overlap of each cell with the layer between the tracked contact and the wall."""
    hi = np.minimum(col.y_hi, col.y_wall)
    lo = np.maximum(col.y_lo, col.contact_y)
    return np.clip(hi - lo, 0.0, None)


def _layer_integral(col: MeshColumn, cells: np.ndarray, gam: float) -> np.ndarray:
    return _layer_widths(col) @ _flux_columns(cells, gam)


def _source(col: MeshColumn, g: GasModel, h: float) -> np.ndarray:
    cells = col.sampled
    T = cells[:, 2] / (g.R * cells[:, 3])
    rate = _layer_widths(col) @ (cells[:, 3] * T ** g.mu * np.exp(-g.eact / (g.R * T)) * cells[:, 4])
    return h * np.array([0.0, 0.0, g.q0 * rate, -rate])


@dataclass(frozen=True)
class SlabBalance:
    """Balances over the layer between the tracked contact and the wall for slab i.

    ``residual`` = outflow at ``ih+`` - inflow at ``(i-1)h+`` + wall and
    contact pressure work - reaction source, for (mass, x-momentum, energy,
    reactant). ``source`` is the reaction source itself.
    """

    i: int
    residual: np.ndarray
    source: np.ndarray


def slab_conservation(field: SolutionField, i: int) -> SlabBalance:
    """Integral balances between columns ``i-1`` and ``i``."""
    if not 1 <= i < len(field.columns):
        raise IndexError(f"slab {i} outside the run")
    g = field.cfg.gas
    old = field.columns[i - 1]
    new = field.columns[i]
    if old.wall_state is None:
        raise MissingWaveData(f"column {i - 1} has no wall or contact data")
    h = field.h
    res = _layer_integral(new, new.cells, g.gamma) - _layer_integral(old, old.cells, g.gamma)
    b = math.tan(field.wall.seg_angle[i - 1])
    res[1] += h * (-b * old.wall_state[2] + old.contact_slope * old.contact_state[2])
    src = _source(new, g, h)
    return SlabBalance(i, res - src, src)


def cumulative_residual(field: SolutionField) -> np.ndarray:
    """Running sum of slab residuals, shape ``(n_slabs, 4)``."""
    res = np.array([slab_conservation(field, i).residual for i in range(1, len(field.columns))])
    return np.cumsum(res, axis=0)


# ---------------------------------------------------------------- entropy

def _entropy(cells: np.ndarray, g: GasModel) -> np.ndarray:
    return g.cv * np.log(cells[..., 2] * cells[..., 3] ** (-g.gamma))


def entropy_residuals(field: SolutionField, k: int) -> np.ndarray:
    """Entropy balance of every diamond window of slab ``k -> k+1``.

    Each window is the band of one diamond over the slab. Inside it the
    solution is the exact fan, so the flux divergence reduces to the
    shock terms ``h m [S]`` with the mass flux ``m`` through the shock;
    rarefactions and contacts carry none. The reaction step at ``x = kh``
    contributes ``m (S~ - S) - h q0 rho phi Z / T`` for the half cells in
    the band. Returns the production minus the source, per diamond.
    """
    col = field.columns[k]
    fans = col.fans
    if fans is None or fans.states is None:
        raise MissingWaveData(f"column {k} lacks fan states; run with keep_fan_states")
    g = field.cfg.gas
    h = field.h
    M = len(col.cells)
    prod = np.zeros(M)
    S = fans.states
    for slot, lo, hi in ((0, 0, 1), (3, 4, 5)):
        sp = fans.speeds[:, slot]
        below = S[:, lo]
        above = S[:, hi]
        strength = fans.strengths[:, 0 if slot == 0 else 4]
        shock = (strength < 0.0) & (fans.kinds != K.FAN_TRIVIAL)
        if slot == 3:
            shock &= fans.kinds != K.FAN_BOUNDARY
        spd = np.where(shock, sp, 0.0)
        m = below[:, 3] * (below[:, 1] - spd * below[:, 0])
        jump = _entropy(above, g) - _entropy(below, g)
        prod += np.where(shock, h * m * jump, 0.0)
    # reaction at x = kh, split over the two half cells in each band
    pre = col.sampled
    post = col.cells
    T = pre[:, 2] / (g.R * pre[:, 3])
    phi = T ** g.mu * np.exp(-g.eact / (g.R * T))
    cell_term = col.s * (pre[:, 3] * pre[:, 0] * (_entropy(post, g) - _entropy(pre, g))
                         - h * g.q0 * pre[:, 3] * phi * pre[:, 4] / T)
    react = cell_term.copy()
    react[1:] += cell_term[:-1]
    return prod + react


def entropy_residual(field: SolutionField, k: int, d: int) -> float:
    return float(entropy_residuals(field, k)[d])


# ---------------------------------------------------------------- rows

def diagnostics_rows(field: SolutionField, w: FunctionalWeights | None = None) -> list[dict]:
    """One row per column with TV, functional and balance values."""
    cfg = field.cfg
    if w is None:
        w = default_weights(cfg.background_lower, cfg.background_upper, cfg.gas)
    l = decay_rate(field)
    rows = []
    for k, col in enumerate(field.columns):
        row = {"k": k, "TV": total_variation(col)}
        if col.fans is not None:
            snap = glimm_functional(field, k, w, l)
            row.update(L=snap.L_c + snap.L1 + snap.L2, Q=snap.Q, F=snap.F, Fc=snap.F_c)
            row["entropy_min"] = (float(entropy_residuals(field, k).min())
                                  if col.fans.states is not None else math.nan)
        else:
            row.update(L=math.nan, Q=math.nan, F=math.nan, Fc=math.nan, entropy_min=math.nan)
        if k >= 1:
            r = slab_conservation(field, k).residual
            row.update(res_mass=r[0], res_xmom=r[1], res_energy=r[2], res_Z=r[3])
        else:
            row.update(res_mass=0.0, res_xmom=0.0, res_energy=0.0, res_Z=0.0)
        rows.append(row)
    return rows
