"""Phase functions f, g, theta = xi (f - f0) + (g - g0), and their stationary points.

f and g are abelian integrals from conj(E_0) on the upper sheet,

    f'(z) = fhat(z) / w(z),   fhat monic of degree n+1,
    g'(z) = ghat(z) / w(z),   ghat of degree n+2 with leading coefficient 4,

whose lower coefficients are fixed by two families of linear conditions:
every cut integral vanishes (so f_+ + f_- is constant along each cut) and
the large-z expansion has no terms beyond the prescribed ones, i.e.
f' = 1 + O(z^-2) and g' = 4z + O(z^-2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InconsistentSystemError, SchemaError, SingularityError
from .surface import HALF_PI, BranchSet, CutTraverse, Segment, SurfaceGeometry, SurfacePoint

SNAP_TOL = 1e-7


def _lead_conditions(series: np.ndarray, n: int, degree: int, lead: float, orders):
    """Rows/rhs of the expansion conditions for num(z)/w, num of given degree.

    The coefficient of z^{-p} in num/w is sum_m num_m c_{m-(n+1)+p}.
    """
    rows, rhs = [], []
    for p in orders:
        row = np.zeros(degree, dtype=complex)
        for m in range(degree):
            idx = m - (n + 1) + p
            if idx >= 0:
                row[m] = series[idx]
        idx = degree - (n + 1) + p
        rows.append(row)
        rhs.append(-lead * series[idx] if idx >= 0 else 0.0)
    return rows, rhs


def _solve_numerator(geo: SurfaceGeometry, degree: int, lead: float, orders, name: str):
    """Lower coefficients of a numerator with fixed leading term."""
    surf, n = geo.surface, geo.genus
    series = surf.inv_w_series(degree + 4)
    rows, rhs = [], []
    mono = lambda z, w: np.stack([z**m / w for m in range(degree + 1)])
    for k in range(n + 1):
        vals = surf.cut_integral(k, mono)
        rows.append(vals[:degree])
        rhs.append(-lead * vals[degree])
    r2, b2 = _lead_conditions(series, n, degree, lead, orders)
    rows += r2
    rhs += b2
    M = np.array(rows)
    b = np.array(rhs, dtype=complex)
    # scale rows so cut and expansion conditions weigh alike
    scale = np.maximum(np.abs(M).max(axis=1), 1e-300)
    Ms, bs = M / scale[:, None], b / scale
    sol, _, rank, sv = np.linalg.lstsq(Ms, bs, rcond=None)
    resid = float(np.max(np.abs(Ms @ sol - bs)))
    tol_rank = int(np.sum(sv > 1e-10 * sv[0]))
    imag = float(np.max(np.abs(sol.imag)))
    report = {"unknowns": degree, "equations": len(rows), "rank": tol_rank,
              "residual": resid, "imag_part": imag}
    if resid > 1e-8 or tol_rank < degree:
        raise InconsistentSystemError(f"{name} normalisation system is inconsistent", **report)
    coeffs = np.concatenate([sol.real, [lead]])
    return coeffs, report


@dataclass
class PhaseModel:
    geometry: SurfaceGeometry
    fhat: np.ndarray  # ascending, length n+2
    ghat: np.ndarray  # ascending, length n+3
    f0: float
    g0: float
    Cf: np.ndarray
    Cg: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def genus(self) -> int:
        return self.geometry.genus

    @property
    def surface(self):
        return self.geometry.surface

    # abelian integrals -------------------------------------------------
    def _prim(self, coeffs, path, subtract=None):
        func = lambda z, w: npoly.polyval(z, coeffs) / w
        if subtract is not None:
            func = lambda z, w: npoly.polyval(z, coeffs) / w - subtract(z)
        return complex(self.surface.integrate(path, func))

    def f(self, p: SurfacePoint) -> complex:
        return p.sheet * self._prim(self.fhat, self.surface.path_to(p.z))

    def g(self, p: SurfacePoint) -> complex:
        return p.sheet * self._prim(self.ghat, self.surface.path_to(p.z))

    def f_on_cut(self, k: int, phi: float, side: int) -> complex:
        return self._prim(self.fhat, self.surface.path_to_cut(k, phi, side))

    def g_on_cut(self, k: int, phi: float, side: int) -> complex:
        return self._prim(self.ghat, self.surface.path_to_cut(k, phi, side))

    def h(self, xi: float) -> np.ndarray:
        """Ascending coefficients of h = xi fhat + ghat."""
        out = self.ghat.astype(float).copy()
        out[: len(self.fhat)] += xi * self.fhat
        return out

    def to_json(self) -> dict:
        return {
            "fhat": self.fhat.tolist(), "ghat": self.ghat.tolist(),
            "f0": self.f0, "g0": self.g0,
            "Cf": self.Cf.tolist(), "Cg": self.Cg.tolist(),
            "diagnostics": self.diagnostics,
        }


def path_over_top(geo: SurfaceGeometry, k: int, phi: float) -> list:
    """Path reaching the east (-) side of cut k from the west, around E_k."""
    s = geo.surface
    d = s.detour
    west = s.B[k] - d
    top = s.A[k] + d
    pts = [complex(np.conj(s.E[0])), complex(s.B[0], s.road), complex(west, s.road),
           complex(west, top), complex(s.B[k], top)]
    pieces = [Segment(pts[0], pts[1], sing_a=True)]
    pieces += [Segment(a, b) for a, b in zip(pts[1:], pts[2:]) if a != b]
    pieces.append(Segment(pts[-1], complex(s.E[k]), sing_b=True))
    pieces.append(CutTraverse(k, -1, HALF_PI, phi))
    return pieces


def leading_coefficient_report(branch: BranchSet, fhat, ghat) -> dict:
    """Compare solved leading coefficients with the alternative closed forms."""
    P = branch.polynomial()[::-1]
    n = branch.genus
    P1, P2 = P[2 * n + 1], P[2 * n]
    return {
        "fhat_n": float(fhat[n]), "fhat_n_closed": float(P1 / 2),
        "ghat_n1": float(ghat[n + 1]),
        "ghat_n1_from_expansion": float(2 * P1),
        "ghat_n1_alternative": float(6 * P1),
        "ghat_n": float(ghat[n]),
        "ghat_n_from_expansion": float(2 * P2 - P1**2 / 2),
        "ghat_n_alternative": float(2 * P2 - 1.5 * P1**2),
    }


def solve_phase(geo: SurfaceGeometry) -> PhaseModel:
    surf, n = geo.surface, geo.genus
    fhat, frep = _solve_numerator(geo, n + 1, 1.0, [1], "f")
    ghat, grep = _solve_numerator(geo, n + 2, 4.0, [0, 1], "g")
    f0 = surf.constant_at_infinity(fhat)
    g0 = surf.constant_at_infinity(ghat)
    model = PhaseModel(geo, fhat, ghat, f0.real, g0.real, np.zeros(n + 1), np.zeros(n + 1))
    Cf, Cg, spread = np.zeros(n + 1), np.zeros(n + 1), 0.0
    imag_c = 0.0
    for k in range(n + 1):
        vals_f, vals_g = [], []
        for phi in (-0.9, 0.0, 0.7):
            top_f = model._prim(fhat, path_over_top(geo, k, phi))
            top_g = model._prim(ghat, path_over_top(geo, k, phi))
            vals_f.append(model.f_on_cut(k, phi, 1) + top_f)
            vals_g.append(model.g_on_cut(k, phi, 1) + top_g)
        vals_f, vals_g = np.array(vals_f), np.array(vals_g)
        spread = max(spread, float(np.ptp(vals_f.real) + np.ptp(vals_f.imag)),
                     float(np.ptp(vals_g.real) + np.ptp(vals_g.imag)))
        imag_c = max(imag_c, float(np.abs(vals_f.imag).max()), float(np.abs(vals_g.imag).max()))
        Cf[k], Cg[k] = vals_f.real.mean(), vals_g.real.mean()
    model.Cf, model.Cg = Cf, Cg
    model.diagnostics = {
        "f_system": frep, "g_system": grep,
        "f0_imag": abs(f0.imag), "g0_imag": abs(g0.imag),
        "cut_constant_spread": spread, "cut_constant_imag": imag_c,
        "leading_coefficients": leading_coefficient_report(geo.branch, fhat, ghat),
    }
    return model


# ------------------------------------------------------------------ theta


def _log_derivs(branch: BranchSet, z):
    """L = P'/(2P) and L' at z."""
    P = np.poly1d(branch.polynomial())
    Pz, P1, P2 = P(z), P.deriv()(z), P.deriv(2)(z)
    return P1 / (2 * Pz), (P2 * Pz - P1 * P1) / (2 * Pz * Pz)


def eval_theta_phase(model: PhaseModel, p: SurfacePoint, xi: float, order: int = 0) -> complex:
    """theta(z; xi) or one of its first three z-derivatives."""
    if order == 0:
        return xi * (model.f(p) - model.f0) + (model.g(p) - model.g0)
    if order not in (1, 2, 3):
        raise SchemaError("order must be 0..3", order=order)
    surf = model.surface
    if surf._branch_index(p.z) is not None:
        raise SingularityError("phase derivatives are singular at a branch point", z=str(p.z))
    return theta_derivative(model, p.z, xi, order, p.sheet)


def theta_derivative(model: PhaseModel, z, xi: float, order: int, sheet: int = 1):
    z = np.asarray(z, dtype=complex)
    h = model.h(xi)
    w = model.surface.w(z, sheet)
    h0 = npoly.polyval(z, h)
    if order == 1:
        return h0 / w
    L, dL = _log_derivs(model.geometry.branch, z)
    h1 = npoly.polyval(z, npoly.polyder(h))
    if order == 2:
        return (h1 - h0 * L) / w
    h2 = npoly.polyval(z, npoly.polyder(h, 2))
    return ((h2 - h1 * L - h0 * dL) - (h1 - h0 * L) * L) / w


# ------------------------------------------------------------ stationary


@dataclass
class StationaryPortrait:
    xi: float
    real_points: list
    complex_pairs: list
    h_coeffs: np.ndarray
    moment_residuals: tuple
    degenerate: bool = False

    @property
    def r(self) -> int:
        return len(self.real_points)


def _polish(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    d = npoly.polyder(coeffs)
    out = roots.copy()
    for _ in range(3):
        num, den = npoly.polyval(out, coeffs), npoly.polyval(out, d)
        step = np.where(np.abs(den) > 0, num / np.where(den == 0, 1, den), 0)
        out = out - step
    return out


def _sorted_roots(coeffs: np.ndarray):
    roots = np.roots(coeffs[::-1])
    roots = _polish(coeffs, roots)
    real, cplx = [], []
    for r in roots:
        if abs(r.imag) < SNAP_TOL * (1 + abs(r)):
            real.append(float(r.real))
        elif r.imag > 0:
            cplx.append(complex(r))
    return sorted(real), sorted(cplx, key=lambda c: (c.real, c.imag)), roots


def stationary_points(model: PhaseModel, xi: float) -> StationaryPortrait:
    h = model.h(xi)
    real, cplx, roots = _sorted_roots(h)
    n = model.genus
    branch = model.geometry.branch
    Bsum = float(branch.B.sum())
    k1 = complex(roots.sum())
    k2 = complex(sum(roots[i] * roots[j] for i in range(len(roots)) for j in range(i + 1, len(roots))))
    sq = float(np.sum(branch.B**2 - branch.A**2))
    res1 = abs(k1 - (Bsum - xi / 4))
    res2 = abs(k2 - k1 * Bsum + 0.5 * (Bsum**2 + sq))
    degenerate = len(real) + 2 * len(cplx) != n + 2
    return StationaryPortrait(float(xi), real, cplx, h, (res1, res2), degenerate)


@dataclass
class CollisionEvent:
    z_j: float
    xi_j: float
    theta1: float
    theta2: float
    theta3: complex
    transversal: float


def find_collisions(model: PhaseModel, tol: float = 1e-3) -> list:
    f, g = model.fhat, model.ghat
    W = npoly.polysub(npoly.polymul(npoly.polyder(f), g), npoly.polymul(f, npoly.polyder(g)))
    real, _, _ = _sorted_roots(np.real_if_close(W))
    events = []
    for z in real:
        fz = npoly.polyval(z, f)
        if abs(fz) < 1e-12:
            continue
        xi = -npoly.polyval(z, g) / fz
        if model.surface.on_cut(complex(z)) is not None:
            continue
        t1 = complex(theta_derivative(model, z, xi, 1))
        t2 = complex(theta_derivative(model, z, xi, 2))
        t3 = complex(theta_derivative(model, z, xi, 3))
        trans = model.f(SurfacePoint(z)) - model.f0
        if abs(t3) < tol or abs(trans) < tol:
            continue
        events.append(CollisionEvent(float(z), float(xi), abs(t1), abs(t2), t3, float(trans.real)))
    return sorted(events, key=lambda e: e.xi_j)


# ---------------------------------------------------------- genus-1 cubic


def cubic_h3(geo: SurfaceGeometry, xi: float) -> float:
    """Constant term (up to sign) of h/4 fixed by the vanishing cut-1 integral."""
    B, A = geo.branch.B, geo.branch.A
    h1 = B.sum() - xi / 4
    h2 = (2 * B[0] * B[1] + A[0] ** 2 + A[1] ** 2) / 2 - B.sum() * xi / 4
    num = geo.surface.cut_integral(1, lambda z, w: (z**3 - h1 * z**2 + h2 * z) / w)
    den = geo.surface.cut_integral(1, lambda z, w: 1.0 / w)
    return float((num / den).real)


@dataclass
class CubicRoots:
    roots: list
    p: float
    q: float
    discriminant: float
    double_root: bool


def genus1_roots(branch: BranchSet, xi: float, h3: float) -> CubicRoots:
    """Trigonometric roots of z^3 - h1 z^2 + h2 z - h3 (h = 4 times this cubic)."""
    if branch.genus != 1:
        raise SchemaError("the cubic formula needs genus 1", genus=branch.genus)
    B, A = branch.B, branch.A
    h1 = B.sum() - xi / 4
    h2 = (2 * B[0] * B[1] + A[0] ** 2 + A[1] ** 2) / 2 - B.sum() * xi / 4
    p = h2 - h1**2 / 3
    q = -2 * h1**3 / 27 + h1 * h2 / 3 - h3
    disc = -4 * p**3 - 27 * q**2
    if p == 0:
        ys = [(-q) ** (1 / 3) * cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    else:
        s = cmath.sqrt(-p / 3)
        arg = cmath.acos((3 * q / (2 * p)) / s)
        ys = [2 * s * cmath.cos(arg / 3 - 2 * math.pi * k / 3) for k in range(3)]
    roots = [h1 / 3 + y for y in ys]
    scale = 1 + abs(p) ** 1.5 + abs(q)
    return CubicRoots(roots, float(p), float(q), float(disc), abs(disc) < 1e-9 * scale**2)


def cubic_reference_constant(branch: BranchSet) -> float:
    """(3 (A0^2 + A1^2) - 2 (B0 - B1)^2) / 6."""
    B, A = branch.B, branch.A
    return float((3 * (A[0] ** 2 + A[1] ** 2) - 2 * (B[0] - B[1]) ** 2) / 6)
