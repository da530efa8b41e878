"""Command-line driver: JSON configuration in, CSV or JSON data plus a diagnostics JSON out.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical failure.
Set FINITEGAP_LOG=DEBUG|INFO|WARNING for log verbosity (stderr).
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .asymptotics import AsymptoticSolver, RegimeParams, xi_at_varpi
from .background import Background, BackgroundParams, canonical_divisor, solve_extended, validate_extended
from .errors import FiniteGapError, SchemaError
from .phase import find_collisions, solve_phase, stationary_points
from .scattering import ScatteringData, scattering_from_config
from .special import HMState, hm_solution_reflected
from .surface import BranchSet, SurfacePoint, build_surface
from .verify import FieldGrid, nls_residual

SCHEMA_VERSION = 1
LOG = logging.getLogger("finitegap_nls")
BUNDLED = ("genus0", "genus1_odd", "genus2_even")


# ------------------------------------------------------------ configuration


def _complex(v, name: str) -> complex:
    try:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError
            return complex(float(v[0]), float(v[1]))
        if isinstance(v, str):
            return complex(v.replace(" ", ""))
        return complex(v)
    except (TypeError, ValueError):
        raise SchemaError(f"{name}: expected a complex number as [re, im]", field=name, value=repr(v)) from None


def _grid(spec, name: str) -> np.ndarray:
    if isinstance(spec, str):
        parts = spec.split(":")
    elif isinstance(spec, (list, tuple)):
        parts = list(spec)
    else:
        raise SchemaError(f"{name}: expected a:b:n", field=name, value=repr(spec))
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError, TypeError):
        raise SchemaError(f"{name}: expected a:b:n", field=name, value=repr(spec)) from None
    if n < 1:
        raise SchemaError(f"{name}: need at least one point", field=name, value=n)
    return np.linspace(a, b, n)


@dataclass
class Config:
    name: str
    genus: int
    branch: BranchSet
    phases: np.ndarray
    divisor: list | None
    reflection: ScatteringData
    regime: RegimeParams
    extended: tuple | None
    grids: dict = field(default_factory=dict)
    theta_tol: float = 1e-14
    quad_order: int = 48

    def grid(self, command: str) -> dict:
        return dict(self.grids.get(command) or {})


def parse_config(raw: dict) -> Config:
    if not isinstance(raw, dict):
        raise SchemaError("configuration must be a JSON object")
    if raw.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise SchemaError("unsupported configuration schema", field="schema", value=raw.get("schema"))
    if "branch_points" not in raw:
        raise SchemaError("branch_points is required", field="branch_points")
    pts = raw["branch_points"]
    if not isinstance(pts, list) or not pts:
        raise SchemaError("branch_points must be a non-empty list of [re, im]", field="branch_points")
    E = tuple(_complex(p, f"branch_points[{i}]") for i, p in enumerate(pts))
    branch = BranchSet(E)
    n = branch.genus
    if "genus" in raw and raw["genus"] != n:
        raise SchemaError("genus does not match the number of branch points", field="genus",
                          expected=n, got=raw["genus"])
    phases = raw.get("phases", [0.0] * n)
    try:
        phases = np.array([float(v) for v in phases])
    except (TypeError, ValueError):
        raise SchemaError("phases must be real numbers", field="phases") from None
    if len(phases) != n:
        raise SchemaError("need one phase per cut 1..n", field="phases", expected=n, got=len(phases))
    divisor = None
    if n >= 1:
        if "divisor" not in raw:
            raise SchemaError("divisor is required for genus >= 1 (a list of points or \"canonical\")",
                              field="divisor")
        dv = raw["divisor"]
        if dv != "canonical":
            if not isinstance(dv, list) or len(dv) != n:
                raise SchemaError("divisor must list genus-many points", field="divisor", expected=n)
            divisor = []
            for i, p in enumerate(dv):
                if isinstance(p, dict):
                    z, sheet = _complex(p.get("z"), f"divisor[{i}].z"), int(p.get("sheet", 1))
                elif isinstance(p, (list, tuple)) and len(p) == 3:
                    z, sheet = _complex(p[:2], f"divisor[{i}]"), int(p[2])
                else:
                    z, sheet = _complex(p, f"divisor[{i}]"), 1
                divisor.append(SurfacePoint(z, sheet))
    reflection = scattering_from_config(raw.get("reflection"))
    reg = raw.get("regime") or {}
    try:
        regime = RegimeParams(float(reg.get("C", 1.0)), None if reg.get("d") is None else float(reg["d"]))
    except (TypeError, ValueError):
        raise SchemaError("regime.C and regime.d must be numbers", field="regime") from None
    ext = raw.get("extended")
    extended = None
    if ext is not None:
        if not isinstance(ext, dict) or "E00" not in ext or "E01" not in ext:
            raise SchemaError("extended needs E00 and E01", field="extended")
        extended = (_complex(ext["E00"], "extended.E00"), _complex(ext["E01"], "extended.E01"))
    tol = raw.get("tolerances") or {}
    grids = raw.get("grids") or {}
    if not isinstance(grids, dict):
        raise SchemaError("grids must be an object", field="grids")
    return Config(str(raw.get("name", "config")), n, branch, phases, divisor, reflection, regime, extended,
                  grids, float(tol.get("theta", 1e-14)), int(tol.get("quad_order", 48)))


def bundled_config_path(name: str) -> Path:
    if name not in BUNDLED:
        raise SchemaError("unknown bundled example", example=name, available=list(BUNDLED))
    return Path(str(resources.files("finitegap_nls") / "data" / f"{name}.json"))


def load_config(path: str | os.PathLike) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SchemaError("cannot read configuration", path=str(path), reason=str(exc)) from None
    except json.JSONDecodeError as exc:
        raise SchemaError("configuration is not valid JSON", path=str(path), line=exc.lineno) from None
    return parse_config(raw)


class Pipeline:
    """Lazily built surface, phase, background and asymptotic solver for one config."""

    def __init__(self, cfg: Config):
        self.cfg = cfg
        self._geo = self._phase = self._bg = self._solver = None

    @property
    def geo(self):
        if self._geo is None:
            self._geo = build_surface(self.cfg.branch, self.cfg.quad_order)
        return self._geo

    @property
    def phase(self):
        if self._phase is None:
            self._phase = solve_phase(self.geo)
        return self._phase

    @property
    def background(self) -> Background:
        if self._bg is None:
            div = self.cfg.divisor if self.cfg.divisor is not None else canonical_divisor(self.geo)
            self._bg = Background(self.geo, self.phase, BackgroundParams(self.cfg.phases, div), self.cfg.theta_tol)
        return self._bg

    @property
    def solver(self) -> AsymptoticSolver:
        if self._solver is None:
            self._solver = AsymptoticSolver(self.background, self.cfg.reflection, self.cfg.regime,
                                            self.cfg.extended)
        return self._solver


# ------------------------------------------------------------ output


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def render_csv(command: str, config: str, columns: list, rows: list) -> str:
    buf = io.StringIO()
    buf.write(f"#schema={SCHEMA_VERSION} command={command} config={config}\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def render_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


@dataclass
class Result:
    text: str
    diagnostics: dict
    exit_code: int = 0


# ------------------------------------------------------------ commands


def _cget(v: complex) -> list:
    return [float(np.real(v)), float(np.imag(v))]


def cmd_surface(p: Pipeline, args) -> Result:
    geo = p.geo
    from .theta import ThetaContext
    ctx = ThetaContext(geo.tau, tol=p.cfg.theta_tol) if geo.genus else None
    out = geo.to_json()
    out["theta_radius"] = ctx.radius if ctx else 0
    out["im_tau_condition"] = float(np.linalg.cond(geo.tau.imag)) if geo.genus else 1.0
    return Result(render_json(out), {"surface": geo.diagnostics})


def cmd_background(p: Pipeline, args) -> Result:
    g = p.cfg.grid("background")
    xs = _grid(args.x or g.get("x", [0.0, 1.0, 8]), "x")
    ts = _grid(args.t or g.get("t", [0.0, 1.0, 4]), "t")
    bg = p.background
    rows = []
    for t in ts:
        for x in xs:
            q = bg.q(x, t)
            rows.append((x, t, q.real, q.imag))
    x0, t0 = float(xs[0]), float(ts[0])
    check = abs(bg.q(x0, t0) - bg.q_from_m_alg(x0, t0))
    diag = {"surface": p.geo.diagnostics, "phase": {"f0": p.phase.f0, "g0": p.phase.g0},
            "q_vs_matrix_residue": check, "max_abs_q": max(math.hypot(r[2], r[3]) for r in rows)}
    return Result(render_csv("background", p.cfg.name, ["x", "t", "re_q", "im_q"], rows), diag)


def cmd_stationary(p: Pipeline, args) -> Result:
    g = p.cfg.grid("stationary")
    xis = _grid(args.xi_range or g.get("xi", [-1.0, 1.0, 11]), "xi-range")
    rows, worst = [], 0.0
    for xi in xis:
        port = stationary_points(p.phase, xi)
        worst = max(worst, *port.moment_residuals)
        rows.append((xi, port.r, ";".join(_fmt(k) for k in port.real_points),
                     port.moment_residuals[0], port.moment_residuals[1]))
    cols = ["xi", "r", "kappas", "moment_residual_1", "moment_residual_2"]
    return Result(render_csv("stationary", p.cfg.name, cols, rows), {"max_moment_residual": worst})


def cmd_collisions(p: Pipeline, args) -> Result:
    events = find_collisions(p.phase)
    rows = [(e.z_j, e.xi_j, float(np.real(e.theta3)), e.theta1, e.theta2, e.transversal) for e in events]
    cols = ["z_j", "xi_j", "theta3", "abs_theta1", "abs_theta2", "transversal"]
    bound = 2 * p.geo.genus + 2
    diag = {"count": len(events), "count_bound": bound, "within_bound": len(events) <= bound}
    return Result(render_csv("collisions", p.cfg.name, cols, rows), diag)


def _scalar_data(p: Pipeline, args) -> tuple[dict, str]:
    solver = p.solver
    if p.geo.genus % 2:
        if args.xi is None:
            idx = int(p.cfg.grid("asym").get("collision", 0))
            if not solver.collisions:
                raise SchemaError("no collision points for this configuration")
            col = solver.collisions[min(idx, len(solver.collisions) - 1)]
        else:
            col = solver.nearest_collision(args.xi)
        return solver.odd_data(col), f"odd (collision xi_j = {col.xi_j:.12g})"
    xi = 0.0 if args.xi is None else args.xi
    return solver.even_data(xi), f"even (xi = {xi:.12g})"


def _delta_jump_samples(delta, count: int = 20) -> list:
    finite = []
    for a, b in delta.intervals:
        lo = a if math.isfinite(a) else (b - 10.0 if math.isfinite(b) else -10.0)
        hi = b if math.isfinite(b) else lo + 10.0
        finite.append((lo, hi))
    total = sum(h - l for l, h in finite)
    out = []
    for lo, hi in finite:
        m = max(1, round(count * (hi - lo) / total))
        out += list(lo + (hi - lo) * (np.arange(m) + 0.5) / m)
    return out[:count]


def cmd_delta(p: Pipeline, args) -> Result:
    data, label = _scalar_data(p, args)
    delta = data["delta"]
    z = _complex(args.probe, "probe")
    val = delta(z)
    sym = abs(val * np.conj(delta(np.conj(z))) - 1)
    jumps = []
    for x in _delta_jump_samples(delta):
        want = 1 + abs(complex(p.cfg.reflection.r(x))) ** 2
        jumps.append({"x": float(x), "residual": float(abs(delta.jump_ratio(x) - want))})
    out = {"variant": delta.variant, "context": label, "intervals": [[a, b] for a, b in delta.intervals],
           "probe": _cget(z), "value": _cget(val), "delta_inf": _cget(delta.delta_inf), "I1": _cget(delta.I1),
           "symmetry_residual": sym, "jump_residuals": jumps, "moment_residual": delta.moment_residual,
           "warnings": delta.warnings}
    diag = {"max_jump_residual": max((j["residual"] for j in jumps), default=0.0), "symmetry_residual": sym,
            "moment_residual": delta.moment_residual}
    return Result(render_json(out), diag)


def cmd_gfun(p: Pipeline, args) -> Result:
    data, label = _scalar_data(p, args)
    g = data["g"]
    z = _complex(args.probe, "probe")
    val = g(z)
    jumps = g.jump_residuals((0.5,))
    out = {"context": label, "probe": _cget(z), "value": _cget(val),
           "symmetry_residual": abs(val - np.conj(g(np.conj(z)))), "jump_residuals": jumps, **g.to_json()}
    diag = {"report": g.report, "max_jump_residual": max((j["residual"] for j in jumps), default=0.0)}
    return Result(render_json(out), diag)


def cmd_painleve(p: Pipeline, args) -> Result:
    g = p.cfg.grid("painleve")
    a = float(args.a if args.a is not None else g.get("a", 1.0))
    grid = _grid(args.grid or g.get("varpi", [-8.0, 8.0, 33]), "grid")
    st = HMState(a)
    rows = []
    for v in grid:
        u, _, tail = st(v)
        rows.append((v, u, tail))
    inside = grid[(grid >= max(st.last_valid, st.floor)) & (grid <= 12.0)]
    diag = {"a": a, "last_valid": st.last_valid,
            "ode_residual": st.ode_residual(np.linspace(max(st.last_valid, st.floor), 12.0, 4001)),
            "dual_integrator_gap_at_0": abs(st(0.0)[0] - hm_solution_reflected(a, 0.0)[0]),
            "grid_points_in_range": int(inside.size)}
    return Result(render_csv("painleve", p.cfg.name, ["varpi", "u", "int_u2"], rows), diag)


def cmd_extended(p: Pipeline, args) -> Result:
    if p.geo.genus % 2:
        raise SchemaError("the extended surface exists for even genus only", genus=p.geo.genus)
    xi = float(args.xi)
    if args.solve or p.cfg.extended is None:
        ext = solve_extended(p.geo, p.phase, xi)
    else:
        ext = validate_extended(p.geo, p.phase, xi, *p.cfg.extended)
    out = ext.to_json()
    return Result(render_json(out), {"residual": ext.residual, "converged": ext.converged, "mode": ext.mode})


def _asym_points(p: Pipeline, args, mode: str) -> list:
    g = p.cfg.grid("asym")
    ts = _grid(args.t or g.get("t", [100.0, 1000.0, 3]), "t")
    pts = []
    if args.x or ("x" in g and not (args.xi or args.varpi)):
        xs = _grid(args.x or g["x"], "x")
        pts = [(x, t) for t in ts for x in xs]
    elif args.varpi or ("varpi" in g and not args.xi):
        if mode != "odd":
            raise SchemaError("varpi grids apply to the odd regime only", field="varpi")
        vs = _grid(args.varpi or g["varpi"], "varpi")
        cols = p.solver.collisions
        if not cols:
            raise SchemaError("no collision points for this configuration")
        idx = int(g.get("collision", 0) if args.collision is None else args.collision)
        if not 0 <= idx < len(cols):
            raise SchemaError("collision index out of range", field="collision", count=len(cols))
        col = cols[idx]
        pts = [(xi_at_varpi(col, p.phase, v, t) * t, t) for t in ts for v in vs]
    else:
        xis = _grid(args.xi or g.get("xi", [0.0]), "xi")
        pts = [(xi * t, t) for t in ts for xi in xis]
    return pts


def cmd_asym(p: Pipeline, args) -> Result:
    mode = args.mode or ("odd" if p.geo.genus % 2 else "even")
    if mode not in ("odd", "even"):
        raise SchemaError("mode must be odd or even", field="mode")
    if (mode == "odd") != (p.geo.genus % 2 == 1):
        raise SchemaError("genus parity does not match the requested regime", genus=p.geo.genus, mode=mode)
    rows, rejected, bundles = [], [], []
    for x, t in _asym_points(p, args, mode):
        try:
            b = p.solver.evaluate(x, t, mode)
        except FiniteGapError as exc:
            if type(exc).__name__ != "RegimeError":
                raise
            rejected.append(exc.as_dict())
            rows.append((x, t, math.nan, math.nan, "out_of_regime", "", ""))
            continue
        param = _fmt(b.varpi) if b.regime == "painleve_odd" else ";".join(_fmt(v) for v in b.nu)
        rows.append((x, t, b.leading.real, b.leading.imag, b.regime, b.error_order, param))
        bundles.append(b)
    cols = ["x", "t", "re_q", "im_q", "regime", "error_order", "varpi_or_nu"]
    diag = {"accepted": len(bundles), "rejected": rejected,
            "first_bundle": bundles[0].to_json() if bundles else None}
    code = 0 if bundles or not rows else 3
    return Result(render_csv("asym", p.cfg.name, cols, rows), diag, code)


def cmd_verify(p: Pipeline, args) -> Result:
    if args.check != "residual":
        raise SchemaError("unknown verify check", check=args.check)
    g = p.cfg.grid("verify")
    nx, nt = (int(v) for v in (args.grid or f"{g.get('nx', 64)}:{g.get('nt', 64)}").split(":"))
    dt = float(args.dt or g.get("dt", 0.01))
    if args.source == "alg":
        bg = p.background
        n = p.geo.genus
        t0 = float(g.get("t0", 0.1))
        if n <= 1:
            L = 2 * math.pi / abs(p.phase.Cf[1]) if n == 1 else float(g.get("period", 3.0))
            grid = FieldGrid.periodic(L, nx, t0, dt, nt, x0=float(g.get("x0", 0.0)), wavenumber=2 * p.phase.f0)
            method = "spectral"
        else:
            grid = FieldGrid(float(g.get("x0", 0.0)), float(g.get("dx", 0.02)), nx, t0, dt, nt)
            method = "fd4"
        value, rep = nls_residual(bg.q, grid, report=True, x_method=method)
    elif args.source == "asym":
        solver = p.solver
        t0 = float(g.get("asym_t0", 100.0))
        if p.geo.genus % 2:
            col = solver.collisions[int(p.cfg.grid("asym").get("collision", 0))]
            xc = col.xi_j * t0
        else:
            xc = 0.0
        dxa = float(g.get("asym_dx", 0.05))
        grid = FieldGrid(xc - 0.5 * nx * dxa, dxa, nx, t0, float(g.get("asym_dt", 0.05)), nt)
        value, rep = nls_residual(lambda x, t: solver.evaluate(x, t).leading, grid, report=True, x_method="fd4")
    else:
        raise SchemaError("source must be alg or asym", field="source")
    out = {"check": "residual", "source": args.source, "residual": value, **rep}
    return Result(render_json(out), {"residual": value})


COMMANDS = {"surface": cmd_surface, "background": cmd_background, "stationary": cmd_stationary,
            "collisions": cmd_collisions, "delta": cmd_delta, "gfun": cmd_gfun, "painleve": cmd_painleve,
            "extended": cmd_extended, "asym": cmd_asym, "verify": cmd_verify}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(f"argument error: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="finitegap-nls", description=__doc__.splitlines()[0])
    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--config", help="JSON configuration file")
    src.add_argument("--example", choices=BUNDLED, help="use a bundled example configuration")
    src.add_argument("--out", help="data output path (default: stdout)")
    src.add_argument("--diagnostics", help="diagnostics JSON path (default: <out>.diagnostics.json or stderr)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("surface", parents=[src], help="periods, tau, Riemann constants")
    s = sub.add_parser("background", parents=[src], help="q_alg on an (x, t) grid")
    s.add_argument("--x")
    s.add_argument("--t")
    s = sub.add_parser("stationary", parents=[src], help="stationary-point portraits over a xi sweep")
    s.add_argument("--xi-range", dest="xi_range")
    sub.add_parser("collisions", parents=[src], help="collision events (xi_j, z_j)")
    for name in ("delta", "gfun"):
        s = sub.add_parser(name, parents=[src], help=f"{name} value and jump residuals at a probe point")
        s.add_argument("--probe", default="0.3+0.7j")
        s.add_argument("--xi", type=float)
    s = sub.add_parser("painleve", parents=[src], help="Painleve II solution with Airy decay")
    s.add_argument("--a", type=float)
    s.add_argument("--grid")
    s = sub.add_parser("extended", parents=[src], help="extended surface points and constants")
    s.add_argument("--xi", type=float, default=0.0)
    s.add_argument("--solve", action="store_true", help="solve for (E00, E01) instead of validating")
    s = sub.add_parser("asym", parents=[src], help="leading-order long-time asymptotics")
    s.add_argument("--mode", choices=("odd", "even"))
    s.add_argument("--x")
    s.add_argument("--t")
    s.add_argument("--xi")
    s.add_argument("--varpi")
    s.add_argument("--collision", type=int)
    s = sub.add_parser("verify", parents=[src], help="PDE residual checks")
    s.add_argument("check", choices=("residual",))
    s.add_argument("--source", choices=("alg", "asym"), default="alg")
    s.add_argument("--grid", help="nx:nt")
    s.add_argument("--dt", type=float)
    return ap


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_diagnostics(diag: dict, args):
    path = getattr(args, "diagnostics", None)
    if path is None and getattr(args, "out", None):
        path = args.out + ".diagnostics.json"
    text = render_json(diag)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stderr.write(text)


def run(argv: list | None = None) -> int:
    logging.basicConfig(level=os.environ.get("FINITEGAP_LOG", "WARNING").upper(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = argparse.Namespace()
    try:
        args = build_parser().parse_args(argv)
        if bool(args.config) == bool(args.example):
            raise SchemaError("give exactly one of --config or --example")
        cfg = load_config(args.config or bundled_config_path(args.example))
        LOG.info("command %s on %s (genus %d)", args.command, cfg.name, cfg.genus)
        res = COMMANDS[args.command](Pipeline(cfg), args)
    except FiniteGapError as exc:
        LOG.error("%s", exc)
        _emit_diagnostics({"command": getattr(args, "command", None), "status": "error", **exc.as_dict()}, args)
        return exc.exit_code
    except (np.linalg.LinAlgError, FloatingPointError, ZeroDivisionError, OverflowError) as exc:
        LOG.error("numerical failure: %s", exc)
        _emit_diagnostics({"command": args.command, "status": "error", "error": type(exc).__name__,
                           "message": str(exc)}, args)
        return 3
    _emit(res.text, args.out)
    _emit_diagnostics({"command": args.command, "config": cfg.name, "status": "ok", **res.diagnostics}, args)
    return res.exit_code


def main() -> None:
    sys.exit(run())
