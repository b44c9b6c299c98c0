"""Command-line front end: configuration parsing, run orchestration and CSV output."""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .errors import ConfigError, GlimmError, ParseError, ValidationError
from .gas import GasModel, State

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_ACCEPTANCE = 4

OUT_ENV = "GLIMMREACT_OUT"
SCALING_WINDOW = (1.7, 2.5)


# ---------------------------------------------------------------- config

@dataclass(frozen=True)
class RunConfig:
    """Validated run description.

    ``upper`` and ``lower`` are lists of ``(y_top, State)`` pieces from the
    top down; ``wall`` is None (flat), a vertex list or ``("bump", a)``.
    """

    gas: GasModel
    T0: float
    y0: float
    upper: tuple
    lower: tuple
    background_upper: State
    background_lower: State
    wall: object = None
    delta0: float | None = None
    h: float = 0.01
    x_max: float = 1.0
    cfl_ratio: float | None = None
    theta_source: str = "van-der-corput"
    seed: int = 0
    y_min: float | None = None
    eps: float = 0.3
    weights: dict = field(default_factory=dict)
    probes: tuple = ("boundary", "reflection", "interaction", "determinant")
    out_dir: str = "out"
    precision: int | None = None
    duct: dict | None = None
    scaling: dict | None = None
    config_hash: str = ""

    def wall_spec(self):
        if isinstance(self.wall, tuple) and self.wall and self.wall[0] == "bump":
            from .cases import wall_bump
            return wall_bump(self.wall[1])
        return self.wall

    def scheme_config(self, h: float | None = None, seed: int | None = None, **kw):
        from .scheme import PiecewiseData, SchemeConfig

        return SchemeConfig(
            gas=self.gas, h=self.h if h is None else h, x_max=self.x_max, y0=self.y0,
            upper=PiecewiseData(self.upper), lower=PiecewiseData(self.lower),
            background_upper=self.background_upper, background_lower=self.background_lower,
            wall=self.wall_spec(), delta0=self.delta0, cfl_ratio=self.cfl_ratio,
            theta_source=self.theta_source, seed=self.seed if seed is None else seed,
            y_min=self.y_min, eps=self.eps, **kw)

    def theta_description(self, seed: int | None = None) -> str:
        return f"{self.theta_source} seed={self.seed if seed is None else seed}"


class _LineLoader(yaml.SafeLoader):
    """Safe loader that records the source line of every mapping value."""


def _construct_mapping(loader, node, deep=False):
    mapping = {}
    lines = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=deep)
        mapping[key] = loader.construct_object(value_node, deep=deep)
        lines[key] = key_node.start_mark.line + 1
    return _Mapping(mapping, lines, node.start_mark.line + 1)


class _Mapping(dict):
    def __init__(self, data, lines, line):
        super().__init__(data)
        self.lines = lines
        self.line = line


_LineLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


class _Reader:
    """Typed access into the parsed document with line-aware errors."""

    def __init__(self, doc):
        self.doc = doc

    @staticmethod
    def _line(block, key):
        if isinstance(block, _Mapping):
            return block.lines.get(key, block.line)
        return None

    def block(self, parent, key, path, required=False):
        if key not in parent:
            if required:
                raise ParseError("missing section", self._line(parent, key), path)
            return _Mapping({}, {}, getattr(parent, "line", None))
        val = parent[key]
        if not isinstance(val, dict):
            raise ParseError("expected a section", self._line(parent, key), path)
        return val

    def number(self, block, key, path, default=None, required=False):
        if key not in block or block[key] is None:
            if required:
                raise ParseError("missing value", self._line(block, key), path)
            return default
        val = block[key]
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ParseError(f"expected a number, got {val!r}", self._line(block, key), path)
        return float(val)

    def integer(self, block, key, path, default=None):
        if key not in block or block[key] is None:
            return default
        val = block[key]
        if isinstance(val, bool) or not isinstance(val, int):
            raise ParseError(f"expected an integer, got {val!r}", self._line(block, key), path)
        return val

    def string(self, block, key, path, default=None, choices=None):
        if key not in block or block[key] is None:
            return default
        val = block[key]
        if not isinstance(val, str) or (choices and val not in choices):
            allowed = f" (one of {', '.join(choices)})" if choices else ""
            raise ParseError(f"invalid value {val!r}{allowed}", self._line(block, key), path)
        return val

    def vector(self, block, key, path, n, required=True):
        if key not in block:
            if required:
                raise ParseError("missing value", self._line(block, key), path)
            return None
        val = block[key]
        if (not isinstance(val, list) or len(val) != n
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in val)):
            raise ParseError(f"expected a list of {n} numbers", self._line(block, key), path)
        return [float(v) for v in val]


def _pieces(r: _Reader, layer, path):
    if not isinstance(layer, list) or not layer:
        raise ParseError("expected a non-empty list of pieces", None, path)
    out = []
    for i, piece in enumerate(layer):
        p = f"{path}[{i}]"
        if not isinstance(piece, dict):
            raise ParseError("expected a mapping with 'top' and 'state'", None, p)
        top = r.number(piece, "top", p + ".top", required=True)
        st = r.vector(piece, "state", p + ".state", 5)
        out.append((top, State(*st)))
    return out


def _wall(r: _Reader, block, path):
    if not block:
        return None
    kinds = [k for k in ("flat", "vertices", "bump") if k in block]
    if len(kinds) != 1:
        raise ParseError("give exactly one of flat, vertices, bump", getattr(block, "line", None), path)
    kind = kinds[0]
    if kind == "flat":
        return None
    if kind == "bump":
        return ("bump", r.number(block, "bump", path + ".bump", required=True))
    verts = block["vertices"]
    if (not isinstance(verts, list) or not verts
            or any(not isinstance(v, list) or len(v) != 2 for v in verts)):
        raise ParseError("expected a list of [x, y] pairs", r._line(block, "vertices"), path + ".vertices")
    try:
        return [(float(a), float(b)) for a, b in verts]
    except (TypeError, ValueError):
        raise ParseError("non-numeric vertex", r._line(block, "vertices"), path + ".vertices") from None


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML run description.

    Raises
    ------
    ParseError
        Malformed text or a field of the wrong type, with its line.
    ValidationError
        Every violated modelling hypothesis, each tagged with its label.
    """
    try:
        doc = yaml.load(text, Loader=_LineLoader)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark else None
        raise ParseError(f"invalid YAML: {exc.problem}", line, None) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be a mapping", 1, None)
    r = _Reader(doc)
    known = {"gas", "wall", "upstream", "scheme", "diagnostics", "output", "duct", "scaling"}
    for key in doc:
        if key not in known:
            raise ParseError("unknown section", doc.lines.get(key), str(key))

    gb = r.block(doc, "gas", "gas")
    gas_kw = {}
    for name in ("gamma", "R", "q0", "mu", "eact"):
        v = r.number(gb, name, f"gas.{name}")
        if v is not None:
            gas_kw[name] = v
    try:
        gas = GasModel(**gas_kw)
    except ConfigError as exc:
        raise ValidationError([f"gas: {exc}"]) from None
    T0 = r.number(gb, "T0", "gas.T0", default=1e-3)

    wb = r.block(doc, "wall", "wall")
    wall = _wall(r, wb, "wall")

    ub = r.block(doc, "upstream", "upstream", required=True)
    y0 = r.number(ub, "y0", "upstream.y0", required=True)
    if "upper" not in ub or "lower" not in ub:
        raise ParseError("upstream needs 'upper' and 'lower'", ub.line, "upstream")
    upper = _pieces(r, ub["upper"], "upstream.upper")
    lower = _pieces(r, ub["lower"], "upstream.lower")
    bu = r.vector(ub, "background_upper", "upstream.background_upper", 5, required=False)
    bl = r.vector(ub, "background_lower", "upstream.background_lower", 5, required=False)
    background_upper = State(*bu) if bu else upper[0][1]
    background_lower = State(*bl) if bl else lower[0][1]

    sb = r.block(doc, "scheme", "scheme")
    tb = r.block(sb, "theta", "scheme.theta")
    h = r.number(sb, "h", "scheme.h", default=0.01)
    x_max = r.number(sb, "x_max", "scheme.x_max", default=1.0)
    kw = dict(
        delta0=r.number(sb, "delta0", "scheme.delta0"),
        cfl_ratio=r.number(sb, "cfl_ratio", "scheme.cfl_ratio"),
        theta_source=r.string(tb, "source", "scheme.theta.source", "van-der-corput",
                              ("van-der-corput", "pseudorandom")),
        seed=r.integer(tb, "seed", "scheme.theta.seed", 0),
        y_min=r.number(sb, "y_min", "scheme.y_min"),
        eps=r.number(sb, "eps", "scheme.eps", default=0.3),
    )

    db = r.block(doc, "diagnostics", "diagnostics")
    weights = {}
    wgt = r.block(db, "weights", "diagnostics.weights")
    for name in wgt:
        weights[str(name)] = r.number(wgt, name, f"diagnostics.weights.{name}")
    probes = db.get("probes", RunConfig.probes)
    if not isinstance(probes, (list, tuple)) or any(
            p not in RunConfig.probes for p in probes):
        raise ParseError(f"probes must be a subset of {list(RunConfig.probes)}",
                         r._line(db, "probes"), "diagnostics.probes")

    ob = r.block(doc, "output", "output")
    out_dir = r.string(ob, "directory", "output.directory", "out")
    precision = r.integer(ob, "precision", "output.precision")

    duct = None
    if "duct" in doc:
        kb = r.block(doc, "duct", "duct")
        table = kb.get("A")
        if (not isinstance(table, list) or len(table) < 2
                or any(not isinstance(v, list) or len(v) != 2 for v in table)):
            raise ParseError("duct.A must be a list of [x, A] pairs", r._line(kb, "A"), "duct.A")
        duct = dict(A=[(float(a), float(b)) for a, b in table],
                    dx=r.number(kb, "dx", "duct.dx", required=True),
                    inlet=r.vector(kb, "inlet", "duct.inlet", 4))

    scaling = None
    if "scaling" in doc:
        cb = r.block(doc, "scaling", "scaling")
        deltas = cb.get("deltas", [0.04, 0.02, 0.01])
        if not isinstance(deltas, list) or len(deltas) < 2:
            raise ParseError("scaling.deltas needs at least two values", r._line(cb, "deltas"),
                             "scaling.deltas")
        scaling = dict(deltas=[float(d) for d in deltas],
                       h=r.number(cb, "h", "scaling.h", default=h),
                       reacting=bool(cb.get("reacting", True)),
                       layer=r.string(cb, "layer", "scaling.layer", default="tracked",
                                      choices=("tracked", "mesh")))

    cfg = RunConfig(gas=gas, T0=T0, y0=y0, upper=tuple(upper), lower=tuple(lower),
                    background_upper=background_upper, background_lower=background_lower,
                    wall=wall, h=h, x_max=x_max, weights=weights, probes=tuple(probes),
                    out_dir=out_dir, precision=precision, duct=duct, scaling=scaling,
                    config_hash=config_hash(text), **kw)
    validate(cfg)
    return cfg


def _initial_slope(spec) -> float:
    if spec is None:
        return 0.0
    if callable(spec):
        eps = 1e-7
        y = np.asarray(spec(np.array([0.0, eps, 2 * eps])), dtype=float)
        return float((-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2 * eps))
    verts = np.asarray(spec, dtype=float)
    if len(verts) < 2:
        return 0.0
    return float((verts[1, 1] - verts[0, 1]) / (verts[1, 0] - verts[0, 0]))


def validate(cfg: RunConfig) -> None:
    """Collect every hypothesis violation and raise them together."""
    from .scheme import build_wall

    bad = []
    g = cfg.gas
    if not (cfg.T0 > 0.0):
        bad.append(f"(H3) T0 = {cfg.T0} must be positive")
    for name, pieces in (("upper", cfg.upper), ("lower", cfg.lower)):
        for i, (top, st) in enumerate(pieces):
            tag = f"upstream.{name}[{i}]"
            u, v, p, rho, z = st.as_array()
            if not (p > 0.0 and rho > 0.0):
                bad.append(f"(H2) {tag}: pressure and density must be positive")
                continue
            c = math.sqrt(g.gamma * p / rho)
            if not u > c:
                bad.append(f"(H2) {tag}: u = {u:g} is not above the sound speed {c:g}")
            if not 0.0 <= z <= 1.0:
                bad.append(f"(H2) {tag}: Z = {z:g} outside [0, 1]")
            T = p / (g.R * rho)
            if not T >= cfg.T0:
                bad.append(f"(H3) {tag}: T = {T:g} below T0 = {cfg.T0:g}")
    if cfg.lower and cfg.lower[-1][1].z != 0.0:
        bad.append("(H2) the bottom piece of the lower layer must carry Z = 0")
    if not cfg.y0 < 0.0:
        bad.append(f"(H2) y0 = {cfg.y0} must be negative")
    if cfg.upper and abs(cfg.upper[0][0]) > 1e-12:
        bad.append("(H2) the upper layer must start at y = 0")
    if cfg.lower and abs(cfg.lower[0][0] - cfg.y0) > 1e-12:
        bad.append("(H2) the lower layer must start at y0")
    if not (cfg.h > 0.0 and cfg.x_max > 0.0):
        bad.append("scheme: h and x_max must be positive")
    else:
        try:
            wall = build_wall(cfg.wall_spec(), cfg.h, cfg.x_max)
        except ConfigError as exc:
            bad.append(f"(H1) {exc}")
        else:
            slope = np.diff(wall.y) / cfg.h
            if abs(wall.y[0]) > 1e-12:
                bad.append(f"(H1) g(0) = {wall.y[0]:g} must vanish")
            d0 = _initial_slope(cfg.wall_spec())
            if abs(d0) > 1e-9:
                bad.append(f"(H1) g'(0+) = {d0:g} must vanish")
            tv = float(np.abs(np.diff(slope)).sum()) + abs(slope[0])
            if cfg.delta0 is not None and not tv < cfg.delta0:
                bad.append(f"(small data) TV(g') = {tv:g} is not below delta0 = {cfg.delta0:g}")
    if bad:
        raise ValidationError(bad)


# ---------------------------------------------------------------- output

def _fmt(x, precision=None) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return repr(x) if precision is None else format(x, f".{precision}g")


def write_csv(path: Path, header: list[str], rows, cfg: RunConfig, theta: str,
              extra: dict | None = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash: {cfg.config_hash}\n")
        fh.write(f"# theta: {theta}\n")
        for k, v in (extra or {}).items():
            fh.write(f"# {k}: {v}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v, cfg.precision) for v in row])


def version_string() -> str:
    try:
        desc = subprocess.run(["git", "describe", "--always", "--dirty"], capture_output=True,
                              text=True, cwd=Path(__file__).resolve().parent, timeout=5)
        if desc.returncode == 0 and desc.stdout.strip():
            return f"{__version__}+g{desc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def write_manifest(out: Path, cfg: RunConfig, command: str, seed: int, files: list[str],
                   extra: dict | None = None) -> None:
    data = {"command": command, "seed": seed, "version": version_string(),
            "config_hash": cfg.config_hash, "theta_source": cfg.theta_source, "files": files}
    data.update(extra or {})
    with open(out / "manifest.json", "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------- commands

@dataclass
class Context:
    cfg: RunConfig
    out: Path
    seed: int
    h: float
    quiet: bool

    def log(self, msg: str) -> None:
        if not self.quiet:
            print(msg, file=sys.stderr)

    @property
    def theta(self) -> str:
        return self.cfg.theta_description(self.seed)


def _run_field(ctx: Context, **kw):
    from .scheme import run

    scfg = ctx.cfg.scheme_config(h=ctx.h, seed=ctx.seed, **kw)
    ctx.log(f"running {round(scfg.x_max / scfg.h)} columns at h={scfg.h:g}")
    return run(scfg)


def _weights(ctx: Context):
    from .diagnostics import default_weights

    c = ctx.cfg
    return default_weights(c.background_lower, c.background_upper, c.gas, **c.weights)


def cmd_run(ctx: Context) -> int:
    from .diagnostics import diagnostics_rows

    fld = _run_field(ctx, keep_fan_states=True)
    rows = []
    for col in fld.columns:
        yh, yl = col.y_hi, col.y_lo
        for j in range(len(col.cells)):
            rows.append((col.k, col.x, yl[j], yh[j], *col.cells[j]))
    write_csv(ctx.out / "columns.csv", ["k", "x", "y_lo", "y_hi", "u", "v", "p", "rho", "Z"],
              rows, ctx.cfg, ctx.theta)
    x, chi = fld.contact_path
    write_csv(ctx.out / "contact.csv", ["x", "chi"], zip(x, chi), ctx.cfg, ctx.theta)
    keys = ["k", "TV", "L", "Q", "F", "Fc", "res_mass", "res_xmom", "res_energy", "res_Z",
            "entropy_min"]
    drows = diagnostics_rows(fld, _weights(ctx))
    write_csv(ctx.out / "diagnostics.csv", keys, ([r[k] for k in keys] for r in drows),
              ctx.cfg, ctx.theta,
              {"L0": f"corner turns truncated at x_max = {fld.columns[-1].x!r}"})
    write_manifest(ctx.out, ctx.cfg, "run", ctx.seed,
                   ["columns.csv", "contact.csv", "diagnostics.csv"])
    ctx.log(f"wrote {len(fld.columns)} columns to {ctx.out}")
    return EXIT_OK


def _duct_solution(ctx: Context):
    from .quasi1d import DuctGeometry, geometry_from_field, inlet_state, solve_q1d

    d = ctx.cfg.duct
    if d is not None:
        tab = np.array(d["A"])
        geom = DuctGeometry.from_function(lambda x: np.interp(x, tab[:, 0], tab[:, 1]),
                                          float(tab[-1, 0]), d["dx"])
        return None, solve_q1d(geom, d["inlet"], ctx.cfg.gas)
    fld = _run_field(ctx)
    return fld, solve_q1d(geometry_from_field(fld), inlet_state(fld), ctx.cfg.gas)


def cmd_quasi1d(ctx: Context) -> int:
    _, q = _duct_solution(ctx)
    dx = q.x[1] - q.x[0]
    A = None
    if ctx.cfg.duct is not None:
        tab = np.array(ctx.cfg.duct["A"])
        A = np.interp(q.x, tab[:, 0], tab[:, 1])
    rows = [(x, (A[i] if A is not None else math.nan), q.rho[i], q.u[i], q.p[i], q.Z[i])
            for i, x in enumerate(q.x)]
    write_csv(ctx.out / "quasi1d.csv", ["x", "A", "rho_A", "u_A", "p_A", "Z_A"], rows,
              ctx.cfg, ctx.theta, {"iterations": q.iterations, "dx": repr(float(dx))})
    write_manifest(ctx.out, ctx.cfg, "quasi1d", ctx.seed, ["quasi1d.csv"],
                   {"iterations": q.iterations, "final_update": q.update})
    ctx.log(f"duct solve converged in {q.iterations} iterations")
    return EXIT_OK


def cmd_compare(ctx: Context) -> int:
    from .quasi1d import compare

    if ctx.cfg.duct is not None:
        raise ConfigError("compare needs a 2D run; remove the duct section")
    fld, q = _duct_solution(ctx)
    cmp = compare(fld, q)
    rows = [(cmp.x[i], cmp.A[i], *cmp.averaged[i], *cmp.duct[i], cmp.max_abs_diff[i])
            for i in range(len(cmp.x))]
    write_csv(ctx.out / "compare.csv",
              ["x", "A", "rho_bar", "u_bar", "p_bar", "Z_bar", "rho_A", "u_A", "p_A", "Z_A",
               "max_abs_diff"], rows, ctx.cfg, ctx.theta, {"sup_diff": repr(cmp.sup)})
    write_manifest(ctx.out, ctx.cfg, "compare", ctx.seed, ["compare.csv"],
                   {"sup_diff": cmp.sup})
    ctx.log(f"sup |U_bar - U_A| = {cmp.sup:.3e}")
    return EXIT_OK


def cmd_probe(ctx: Context) -> int:
    from . import diagnostics as D
    from .gas import kappa
    from .riemann import solve_strong_contact, strong_det_closed_form

    c = ctx.cfg
    U1, U2, g = c.background_lower, c.background_upper, c.gas
    rows = []
    if "boundary" in c.probes:
        b = D.probe_boundary_coefficients(U2, g)
        rows += [("K_b", b.K_b, U2.u / kappa(U2, 1, g)), ("K_b0", b.K_b0, math.nan),
                 ("K_b2", b.K_b2, 0.0), ("K_b3", b.K_b3, 0.0), ("K_b5", b.K_b5, 1.0)]
    if "reflection" in c.probes:
        num, closed = D.probe_reflection(U1, U2, g)
        rows.append(("K25", num, closed))
    if "interaction" in c.probes:
        k21, _ = D.probe_from_above(U1, U2, g)
        k11, k15 = D.probe_from_below(U1, U2, g)
        rows += [("K21", k21, math.nan), ("K11", k11, math.nan), ("K15", k15, math.nan)]
    if "determinant" in c.probes:
        rows.append(("det", solve_strong_contact(U1, U2, g).det, strong_det_closed_form(U1, U2, g)))
    write_csv(ctx.out / "probes.csv", ["name", "numeric", "closed_form"],
              rows,
              c, ctx.theta)
    write_manifest(ctx.out, c, "probe", ctx.seed, ["probes.csv"])
    for n, a, b in rows:
        ctx.log(f"{n:6s} {a: .10g}  {b: .10g}")
    return EXIT_OK


def cmd_scaling(ctx: Context) -> int:
    from .cases import perturbed_config
    from .quasi1d import scaling_study

    c = ctx.cfg
    sc = c.scaling or {"deltas": [0.04, 0.02, 0.01], "h": ctx.h, "reacting": True,
                       "layer": "tracked"}
    h = ctx.h if ctx.h != c.h else sc["h"]

    def make(delta, hh, x_max):
        ctx.log(f"scaling run delta={delta:g} h={hh:g}")
        return perturbed_config(delta, hh, x_max, reacting=sc["reacting"], gas=c.gas,
                                theta_source=c.theta_source, seed=ctx.seed)

    res = scaling_study(sc["deltas"], h, c.x_max, make_config=make, layer=sc["layer"])
    lo, hi = SCALING_WINDOW
    ok = lo <= res.exponent <= hi
    write_csv(ctx.out / "scaling.csv", ["delta_star", "h", "sup_diff"], res.rows, c, ctx.theta,
              {"exponent": repr(res.exponent), "window": f"[{lo}, {hi}]"})
    write_manifest(ctx.out, c, "scaling", ctx.seed, ["scaling.csv"],
                   {"exponent": res.exponent, "within_window": ok})
    ctx.log(f"fitted exponent {res.exponent:.3f} ({'inside' if ok else 'outside'} [{lo}, {hi}])")
    return EXIT_OK if ok else EXIT_ACCEPTANCE


COMMANDS = {"run": cmd_run, "quasi1d": cmd_quasi1d, "compare": cmd_compare,
            "probe": cmd_probe, "scaling": cmd_scaling}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glimmreact",
                                description="Glimm scheme for reacting supersonic flow past a wall")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, type=Path, help="YAML run description")
    p.add_argument("--out", type=Path, help=f"output directory (or ${OUT_ENV})")
    p.add_argument("--seed", type=int, help="override the theta seed")
    p.add_argument("--h", type=float, help="override the column spacing")
    p.add_argument("--quiet", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config.read_text())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ParseError, ValidationError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    out = args.out or Path(os.environ.get(OUT_ENV, cfg.out_dir))
    out.mkdir(parents=True, exist_ok=True)
    ctx = Context(cfg, out, cfg.seed if args.seed is None else args.seed,
                  cfg.h if args.h is None else args.h, args.quiet)
    try:
        return COMMANDS[args.command](ctx)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except GlimmError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
