"""Hyperelliptic surface w^2 = prod_k (z - E_k)(z - conj E_k) with vertical cuts.

Every cut k is the straight segment from conj(E_k) up to E_k. The upper-sheet
radical is the product of per-cut factors

    s_k(z) = (z - B_k) * sqrt((z - E_k)(z - conj E_k) / (z - B_k)^2),

each of which has its branch cut exactly on the segment and behaves like z at
infinity, so w ~ z^(n+1) on the upper sheet without any global sign fix.

The "+" side of a cut is its left side with respect to the upward
orientation, i.e. the west side. Integrals along a cut use the substitution
z = B + i A sin(phi), which turns the inverse square-root endpoint behaviour
into a smooth integrand for Gauss-Legendre.

Homology basis:
  a_j  counterclockwise loop around cut j on the upper sheet (j = 1..n)
  b_j  from conj(E_0) to conj(E_j) on the upper sheet, passing below every
       cut, and back on the lower sheet
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateSurfaceError, QuadratureError, SchemaError, SingularityError

HALF_PI = 0.5 * math.pi


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class BranchSet:
    """Upper-half branch points E_k = B_k + i A_k, sorted by (B_k, A_k)."""

    points: tuple

    def __post_init__(self):
        pts = [complex(p) for p in self.points]
        if not pts:
            raise SchemaError("branch set needs at least one point")
        for p in pts:
            if not (math.isfinite(p.real) and math.isfinite(p.imag)):
                raise SchemaError("non-finite branch point", point=str(p))
            if p.imag <= 0:
                raise SchemaError("branch points must have positive imaginary part", point=str(p))
        pts.sort(key=lambda p: (p.real, p.imag))
        for a, b in zip(pts, pts[1:]):
            if abs(a - b) < 1e-14 * (1 + abs(a)):
                raise SchemaError("branch points must be distinct", point=str(a))
        object.__setattr__(self, "points", tuple(pts))

    @property
    def genus(self) -> int:
        return len(self.points) - 1

    @property
    def E(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    @property
    def B(self) -> np.ndarray:
        return self.E.real

    @property
    def A(self) -> np.ndarray:
        return self.E.imag

    def polynomial(self) -> np.ndarray:
        """Coefficients of P(z), highest power first."""
        roots = np.concatenate([self.E, self.E.conj()])
        return np.real_if_close(np.poly(roots))

    def to_json(self) -> list:
        return [[p.real, p.imag] for p in self.points]


@dataclass(frozen=True)
class SurfacePoint:
    z: complex
    sheet: int = 1

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise SchemaError("NaN or infinite surface point", z=str(z))
        if self.sheet not in (1, -1):
            raise SchemaError("sheet must be +1 (upper) or -1 (lower)", sheet=self.sheet)
        object.__setattr__(self, "z", z)


# --------------------------------------------------------------------------
# path pieces


@dataclass(frozen=True)
class Segment:
    """Straight segment a -> b. Endpoints flagged singular sit on branch points."""

    a: complex
    b: complex
    sing_a: bool = False
    sing_b: bool = False
    sheet: int = 1

    def reversed(self, sheet=None) -> "Segment":
        return Segment(self.b, self.a, self.sing_b, self.sing_a, self.sheet if sheet is None else sheet)


@dataclass(frozen=True)
class CutTraverse:
    """Walk along cut k on one side: z = B_k + i A_k sin(phi), phi0 -> phi1."""

    k: int
    side: int
    phi0: float = -HALF_PI
    phi1: float = HALF_PI
    sheet: int = 1

    def reversed(self, sheet=None) -> "CutTraverse":
        return CutTraverse(self.k, self.side, self.phi1, self.phi0, self.sheet if sheet is None else sheet)


@dataclass(frozen=True)
class Ray:
    """Half-line a + s * direction, s in [0, inf)."""

    a: complex
    direction: complex
    sheet: int = 1


Path = list


class Surface:
    """Radical evaluation and the quadrature engine for one branch set.

    This class knows nothing about normalised differentials; see
    :func:`build_surface` for the full geometry.
    """

    def __init__(self, branch: BranchSet, quad_order: int = 48):
        if quad_order < 16:
            raise SchemaError("quad_order must be at least 16", quad_order=quad_order)
        self.branch = branch
        self.quad_order = int(quad_order)
        self.E = branch.E
        self.B = branch.B
        self.A = branch.A
        self.genus = branch.genus
        self.branch_points = np.concatenate([self.E, self.E.conj()])
        span = max(np.ptp(self.B), self.A.max(), 1e-3)
        self.scale = float(span)
        gaps = [abs(a - b) for i, a in enumerate(self.B) for b in self.B[i + 1:]]
        self.min_gap = float(min(gaps)) if gaps else float(self.A.max())
        self.detour = 0.1 * self.min_gap
        self.road = -float(self.A.max()) - 0.5 * max(self.min_gap, 0.5 * float(self.A.max()))

    # ---------------------------------------------------------------- radical

    def factor(self, z, k: int):
        z = np.asarray(z, dtype=complex)
        e, b = self.E[k], self.B[k]
        d = z - b
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = (z - e) * (z - np.conj(e)) / (d * d)
            out = d * np.sqrt(ratio)
        return np.where(d == 0, 1j * self.A[k], out)

    def w(self, z, sheet: int = 1):
        """Radical on the given sheet, off the cuts."""
        z = np.asarray(z, dtype=complex)
        if np.any(~np.isfinite(z)):
            raise SchemaError("NaN input to radical")
        out = np.ones_like(z)
        for k in range(self.genus + 1):
            out = out * self.factor(z, k)
        return sheet * out

    def w_on_cut(self, k: int, phi, side: int, sheet: int = 1):
        """One-sided radical at z = B_k + i A_k sin(phi)."""
        phi = np.asarray(phi, dtype=float)
        z = self.B[k] + 1j * self.A[k] * np.sin(phi)
        own = -side * self.A[k] * np.cos(phi)
        out = own.astype(complex)
        for j in range(self.genus + 1):
            if j != k:
                out = out * self.factor(z, j)
        return sheet * out

    def on_cut(self, z: complex, tol: float = 0.0) -> int | None:
        for k in range(self.genus + 1):
            if abs(z.real - self.B[k]) <= tol * self.scale and abs(z.imag) <= self.A[k]:
                return k
        return None

    def inv_w_series(self, terms: int) -> np.ndarray:
        """c_m with 1/w = z^-(n+1) * sum_m c_m z^-m on the upper sheet."""
        out = np.zeros(terms, dtype=complex)
        out[0] = 1.0
        binom = np.array([math.comb(2 * m, m) / 4.0**m for m in range(terms)])
        for root in self.branch_points:
            series = binom * root ** np.arange(terms)
            out = np.convolve(out, series)[:terms]
        return np.real_if_close(out, tol=1e6)

    def w_series(self, terms: int) -> np.ndarray:
        """c_m with w = z^(n+1) * sum_m c_m z^-m on the upper sheet."""
        out = np.zeros(terms, dtype=complex)
        out[0] = 1.0
        coef = np.array([_half_binom(m) for m in range(terms)])
        for root in self.branch_points:
            series = coef * (-root) ** np.arange(terms)
            out = np.convolve(out, series)[:terms]
        return np.real_if_close(out, tol=1e6)

    def laurent(self, num_coeffs, terms: int = 40):
        """Exponents and coefficients of num(z)/w(z) at infinity (upper sheet)."""
        num = np.trim_zeros(np.asarray(num_coeffs, dtype=complex), "b")
        deg = len(num) - 1
        c = self.inv_w_series(terms + deg + 1)
        desc = num[::-1]
        coef = np.convolve(desc, c)[:terms]
        expo = deg - (self.genus + 1) - np.arange(terms)
        return expo, coef

    def constant_at_infinity(self, num_coeffs, terms: int = 60) -> complex:
        """Finite part at infinity of the integral of num/w from conj(E_0).

        The path is cut at a moderate radius and the remaining tail is summed
        from the Laurent series, which avoids cancelling huge terms.
        """
        expo, coef = self.laurent(num_coeffs, terms)
        log_term = coef[expo == -1]
        if log_term.size and abs(log_term[0]) > 1e-9 * (1 + np.abs(coef).max()):
            raise SingularityError("integrand has a residue at infinity", residue=abs(log_term[0]))
        radius = 12.0 * (self.scale + float(np.abs(self.branch_points).max()))
        Z = complex(self.B[0], -radius)
        func = lambda z, w: np.polynomial.polynomial.polyval(z, num_coeffs) / w
        F = complex(self.integrate(self.path_to(Z), func))
        keep = expo != -1
        return F - complex(np.sum(coef[keep] * Z ** (expo[keep] + 1.0) / (expo[keep] + 1.0)))

    # ------------------------------------------------------------ quadrature

    def _dist(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.min(np.abs(z[:, None] - self.branch_points[None, :]), axis=1)

    def _panels(self, zmap, s0, s1, depth=0, ignore=None):
        za, zb = zmap(s0), zmap(s1)
        zm = zmap(0.5 * (s0 + s1))
        dist = self._dist(zm)[0] if ignore is None else _dist_except(self.branch_points, zm, ignore)
        length = abs(zb - za)
        if length <= 0.6 * dist or depth > 40:
            return [(s0, s1)]
        sm = 0.5 * (s0 + s1)
        return self._panels(zmap, s0, sm, depth + 1, ignore) + self._panels(zmap, sm, s1, depth + 1, ignore)

    def _seg_nodes(self, seg: Segment, order: int):
        """Nodes z, weights dz (complex) for a segment, endpoint singularities absorbed."""
        a, b = complex(seg.a), complex(seg.b)
        zs, ws = [], []
        length = abs(b - a)
        if length == 0:
            return np.zeros(0, complex), np.zeros(0, complex)
        x, wt = gauss_legendre(order)
        lo, hi = 0.0, 1.0
        if seg.sing_a:
            ell = min(0.45, 0.5 * _dist_except(self.branch_points, a, a) / length)
            hi_a = ell
            # z = a + (b - a) * hi_a * s^2
            s = x
            zs.append(a + (b - a) * hi_a * s * s)
            ws.append((b - a) * hi_a * 2 * s * wt)
            lo = ell
        if seg.sing_b:
            ell = min(0.45, 0.5 * _dist_except(self.branch_points, b, b) / length)
            s = x
            zs.append(b - (b - a) * ell * s * s)
            ws.append((b - a) * ell * 2 * s * wt)
            hi = 1.0 - ell
        if hi > lo:
            zmap = lambda u: a + (b - a) * u
            for p0, p1 in self._panels(zmap, lo, hi):
                u = p0 + (p1 - p0) * x
                zs.append(a + (b - a) * u)
                ws.append((b - a) * (p1 - p0) * wt)
        return np.concatenate(zs), np.concatenate(ws)

    def _ray_nodes(self, ray: Ray, order: int):
        d = complex(ray.direction) / abs(ray.direction)
        a = complex(ray.a)
        reach = 4.0 * (self.scale + abs(a))
        z1, w1 = self._seg_nodes(Segment(a, a + reach * d), order)
        x, wt = gauss_legendre(order)
        # tail: z = a + reach d / u, u in (0, 1]
        zs, ws = [z1], [w1]
        for p0, p1 in ((0.0, 0.25), (0.25, 1.0)):
            u = p0 + (p1 - p0) * x
            zs.append(a + reach * d / u)
            ws.append(reach * d / (u * u) * (p1 - p0) * wt)
        return np.concatenate(zs), np.concatenate(ws)

    def nodes(self, piece, order: int | None = None):
        """(z, dz, w) triples for one path piece."""
        order = order or self.quad_order
        if isinstance(piece, Segment):
            z, dz = self._seg_nodes(piece, order)
            return z, dz, self.w(z, piece.sheet)
        if isinstance(piece, Ray):
            z, dz = self._ray_nodes(piece, order)
            return z, dz, self.w(z, piece.sheet)
        if isinstance(piece, CutTraverse):
            x, wt = gauss_legendre(order)
            k = piece.k
            lo, hi = sorted((piece.phi0, piece.phi1))
            sign = 1.0 if piece.phi1 >= piece.phi0 else -1.0
            zs, dzs, wv = [], [], []
            # panels keep nearby foreign branch points resolved
            zmap = lambda u: self.B[k] + 1j * self.A[k] * math.sin(lo + (hi - lo) * u)
            own = {complex(self.E[k]), complex(np.conj(self.E[k]))}
            for p0, p1 in self._panels(zmap, 0.0, 1.0, ignore=own):
                phi = lo + (hi - lo) * (p0 + (p1 - p0) * x)
                z = self.B[k] + 1j * self.A[k] * np.sin(phi)
                zs.append(z)
                dzs.append(sign * 1j * self.A[k] * np.cos(phi) * (hi - lo) * (p1 - p0) * wt)
                wv.append(self.w_on_cut(k, phi, piece.side, piece.sheet))
            return np.concatenate(zs), np.concatenate(dzs), np.concatenate(wv)
        raise TypeError(f"unknown path piece {piece!r}")

    def integrate(self, path: Sequence, func: Callable, order: int | None = None):
        """Sum over pieces of  integral func(z, w) dz ; func may return (..., nodes)."""
        total = 0.0
        for piece in path:
            z, dz, w = self.nodes(piece, order)
            total = total + np.sum(func(z, w) * dz, axis=-1)
        return total

    def integrate_checked(self, path, func, rtol: float = 1e-10):
        """Integral plus an order-doubling error estimate."""
        lo = self.integrate(path, func, self.quad_order)
        hi = self.integrate(path, func, 2 * self.quad_order)
        err = float(np.max(np.abs(np.asarray(hi) - np.asarray(lo))))
        if err > rtol * (1.0 + float(np.max(np.abs(hi)))) * 1e4:
            raise QuadratureError("quadrature refinement did not converge", estimate=err)
        return hi, err

    def cut_integral(self, k: int, func: Callable, order: int | None = None):
        """integral from conj(E_k) to E_k of func(z, w_+) dz along the + side."""
        return self.integrate([CutTraverse(k, 1)], func, order)

    # ---------------------------------------------------------------- paths

    def path_to(self, z: complex, sheet: int = 1) -> Path:
        """Canonical path from conj(E_0) to z on the upper sheet (then mirrored)."""
        z = complex(z)
        base = complex(np.conj(self.E[0]))
        road = min(self.road, z.imag - 0.5 * self.detour) if z.imag < self.road else self.road
        corner0 = complex(self.B[0], road)
        x = z.real
        shifted = False
        for k in range(self.genus + 1):
            if abs(x - self.B[k]) < self.detour and z.imag > -self.A[k]:
                side = 1.0 if x >= self.B[k] else -1.0
                x = self.B[k] + side * self.detour
                shifted = True
        hit = self._branch_index(z)
        pieces = [Segment(base, corner0, sing_a=True)]
        if hit is not None and hit[1] == -1:
            # ends on a lower branch point: come straight up underneath it
            k = hit[0]
            pieces.append(Segment(corner0, complex(self.B[k], road)))
            pieces.append(Segment(complex(self.B[k], road), z, sing_b=True))
            if k == 0:
                pieces = []
        elif hit is not None:
            # ends on an upper branch point: reach conj(E_k), then up the east side
            k = hit[0]
            pieces = self.path_to(complex(np.conj(self.E[k]))) + [CutTraverse(k, -1)]
        else:
            corner1 = complex(x, road)
            pieces.append(Segment(corner0, corner1))
            pieces.append(Segment(corner1, complex(x, z.imag)))
            if shifted:
                pieces.append(Segment(complex(x, z.imag), z))
        pieces = [p for p in pieces if not (isinstance(p, Segment) and p.a == p.b)]
        if sheet == -1:
            pieces = [_with_sheet(p, -1) for p in pieces]
        return pieces

    def path_to_cut(self, k: int, phi: float, side: int) -> Path:
        """Path from the base point to B_k + i A_k sin(phi) on the given side of cut k."""
        head = self.path_to(complex(np.conj(self.E[k]))) if k else []
        return head + [CutTraverse(k, side, -HALF_PI, phi)]

    def path_to_infinity(self) -> Path:
        base = complex(np.conj(self.E[0]))
        corner0 = complex(self.B[0], self.road)
        return [Segment(base, corner0, sing_a=True), Ray(corner0, -1j)]

    def _branch_index(self, z: complex):
        for k in range(self.genus + 1):
            if abs(z - self.E[k]) <= 1e-14 * (1 + abs(z)):
                return k, 1
            if abs(z - np.conj(self.E[k])) <= 1e-14 * (1 + abs(z)):
                return k, -1
        return None

    def a_cycle(self, j: int) -> Path:
        return [CutTraverse(j, -1, -HALF_PI, HALF_PI), CutTraverse(j, 1, HALF_PI, -HALF_PI)]

    def b_cycle(self, j: int) -> Path:
        up = self.path_to(complex(np.conj(self.E[j])))
        return up + [p.reversed(sheet=-1) for p in reversed(up)]


def _with_sheet(piece, sheet):
    if isinstance(piece, Segment):
        return Segment(piece.a, piece.b, piece.sing_a, piece.sing_b, sheet)
    if isinstance(piece, CutTraverse):
        return CutTraverse(piece.k, piece.side, piece.phi0, piece.phi1, sheet)
    return Ray(piece.a, piece.direction, sheet)


def _dist_except(points, z, skip):
    skip = np.atleast_1d(np.asarray(list(skip) if isinstance(skip, set) else skip, dtype=complex))
    d = np.abs(points - z)
    keep = np.all(np.abs(points[:, None] - skip[None, :]) > 1e-14 * (1 + np.abs(points[:, None])), axis=1)
    return float(d[keep].min()) if np.any(keep) else float("inf")


def _half_binom(m: int) -> float:
    """Coefficient of x^m in (1 + x)^(1/2)."""
    out = 1.0
    for i in range(m):
        out *= (0.5 - i) / (i + 1)
    return out


def _monomials(n: int):
    def func(z, w):
        return np.stack([z**m / w for m in range(n)])
    return func


@dataclass
class SurfaceGeometry:
    """Normalised differentials, period matrix and Riemann constants."""

    surface: Surface
    diff_coeffs: np.ndarray
    tau: np.ndarray
    riemann_K: np.ndarray
    a_periods_raw: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def branch(self) -> BranchSet:
        return self.surface.branch

    @property
    def genus(self) -> int:
        return self.surface.genus

    def w(self, z, sheet: int = 1):
        return self.surface.w(z, sheet)

    def differentials(self, z, w):
        """zeta_j(z)/dz for j = 1..n evaluated with the given radical values."""
        n = self.genus
        mono = np.stack([np.asarray(z) ** m for m in range(n)])
        return np.tensordot(self.diff_coeffs, mono, axes=(1, 0)) / w

    def integrate_differentials(self, path):
        if self.genus == 0:
            return np.zeros(0, complex)
        return self.surface.integrate(path, self.differentials)

    def abel(self, p: SurfacePoint) -> np.ndarray:
        """Abel map from conj(E_0) along the canonical path; lower sheet is the negative."""
        if self.genus == 0:
            return np.zeros(0, complex)
        k = self.surface.on_cut(p.z)
        if k is not None and self.surface._branch_index(p.z) is None:
            raise SingularityError("point lies on a cut; use abel_on_cut with a side", cut=k)
        val = self.integrate_differentials(self.surface.path_to(p.z))
        return p.sheet * val

    def abel_on_cut(self, k: int, phi: float, side: int) -> np.ndarray:
        if self.genus == 0:
            return np.zeros(0, complex)
        return self.integrate_differentials(self.surface.path_to_cut(k, phi, side))

    def abel_infinity(self, sheet: int = 1) -> np.ndarray:
        if self.genus == 0:
            return np.zeros(0, complex)
        return sheet * self.integrate_differentials(self.surface.path_to_infinity())

    def a_period(self, j: int) -> np.ndarray:
        return self.integrate_differentials(self.surface.a_cycle(j))

    def b_period(self, j: int) -> np.ndarray:
        return self.integrate_differentials(self.surface.b_cycle(j))

    def reduce_to_lattice(self, v: np.ndarray):
        """Nearest lattice point m + tau m' to v and the residual."""
        im_tau = self.tau.imag
        mprime = np.round(np.linalg.solve(im_tau, v.imag))
        rest = v - self.tau @ mprime
        m = np.round(rest.real)
        return m, mprime, v - m - self.tau @ mprime

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "branch_points": self.branch.to_json(),
            "tau": _cjson(self.tau),
            "riemann_K": _cjson(self.riemann_K),
            "diagnostics": self.diagnostics,
        }


def _cjson(a):
    a = np.asarray(a)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def eval_w(surface: "SurfaceGeometry | Surface", p: SurfacePoint) -> complex:
    surf = surface.surface if isinstance(surface, SurfaceGeometry) else surface
    if surf._branch_index(p.z) is not None:
        return 0j
    k = surf.on_cut(p.z)
    if k is not None:
        raise SingularityError("point lies on a cut; boundary values need a side", cut=k)
    return complex(surf.w(p.z, p.sheet))


def cycle_integral(surface: "SurfaceGeometry | Surface", numerator_coeffs, cycle: Path) -> complex:
    """integral over the path of R(z)/w dz, R given by ascending coefficients."""
    surf = surface.surface if isinstance(surface, SurfaceGeometry) else surface
    coeffs = np.asarray(numerator_coeffs, dtype=complex)
    func = lambda z, w: np.polynomial.polynomial.polyval(z, coeffs) / w
    val, _ = surf.integrate_checked(cycle, func)
    return complex(val)


def abel_map(surface: SurfaceGeometry, p: SurfacePoint) -> np.ndarray:
    return surface.abel(p)


def build_surface(branch: BranchSet, quad_order: int = 48) -> SurfaceGeometry:
    surf = Surface(branch, quad_order)
    n = surf.genus
    if n == 0:
        return SurfaceGeometry(surf, np.zeros((0, 0)), np.zeros((0, 0), complex),
                               np.zeros(0, complex), np.zeros((0, 0), complex),
                               {"genus": 0})
    mono = _monomials(n)
    A = np.array([surf.integrate(surf.a_cycle(i), mono) for i in range(1, n + 1)])
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > 1e12:
        i, j = _closest_cuts(branch)
        raise DegenerateSurfaceError("normalisation matrix is singular", condition=cond,
                                     near_cuts=[i, j])
    C = np.linalg.inv(A.T)
    Bm = np.array([surf.integrate(surf.b_cycle(j), mono) for j in range(1, n + 1)])
    tau = Bm @ C.T
    # b-cycles sharing the base branch point pick up integer cross terms; an
    # integer off-diagonal shift leaves the theta function unchanged
    for j in range(n):
        for l in range(j + 1, n):
            tau[j, l] -= round((tau[j, l] - tau[l, j]).real)
    geo = SurfaceGeometry(surf, C, tau, np.zeros(n, complex), A)
    formula_K = _riemann_constants(geo)
    geo.riemann_K, k_report = _riemann_constants_by_vanishing(geo)
    k_report["formula_value"] = _cjson(formula_K)
    k_report["formula_offset_from_lattice"] = float(np.abs(geo.reduce_to_lattice(geo.riemann_K - formula_K)[2]).max())
    norm = np.array([geo.a_period(i) for i in range(1, n + 1)])
    eig = np.linalg.eigvalsh(0.5 * (tau.imag + tau.imag.T))
    geo.diagnostics = {
        "genus": n,
        "normalisation_residual": float(np.max(np.abs(norm - np.eye(n)))),
        "tau_symmetry": float(np.max(np.abs(tau - tau.T))),
        "im_tau_eigenvalues": eig.tolist(),
        "a_matrix_condition": cond,
        "riemann_constants": k_report,
    }
    if eig.min() <= 0:
        raise DegenerateSurfaceError("Im tau is not positive definite", eigenvalues=eig.tolist())
    return geo


def _closest_cuts(branch):
    E = branch.E
    best, pair = float("inf"), (0, 0)
    for i in range(len(E)):
        for j in range(i + 1, len(E)):
            if abs(E[i] - E[j]) < best:
                best, pair = abs(E[i] - E[j]), (i, j)
    return pair


def _riemann_constants(geo: SurfaceGeometry) -> np.ndarray:
    """K_j = 1/2 - tau_jj/2 + sum_{i != j} loop integral over a_i of phi_j zeta_i."""
    surf, n = geo.surface, geo.genus
    K = 0.5 - 0.5 * np.diag(geo.tau)
    x, wt = gauss_legendre(surf.quad_order)
    for i in range(1, n + 1):
        start = geo.integrate_differentials(surf.path_to(complex(np.conj(surf.E[i]))))
        # loop: up the east side (phi -pi/2 -> pi/2), down the west side
        total = np.zeros(n, complex)
        running = start.copy()
        for piece in surf.a_cycle(i):
            lo, hi = piece.phi0, piece.phi1
            phis = lo + (hi - lo) * x
            dphi = (hi - lo) * wt
            prev = lo
            for phi, dp in zip(phis, dphi):
                running = running + _cut_partial(geo, piece, prev, phi)
                prev = phi
                z = surf.B[i] + 1j * surf.A[i] * math.sin(phi)
                wv = surf.w_on_cut(i, phi, piece.side, piece.sheet)
                zeta = geo.differentials(np.array([z]), np.array([wv]))[:, 0]
                dz = 1j * surf.A[i] * math.cos(phi) * dp
                total += running * zeta[i - 1] * dz
            running = running + _cut_partial(geo, piece, prev, hi)
        for j in range(n):
            if j != i - 1:
                K[j] += total[j]
    return K


def _riemann_constants_by_vanishing(geo: SurfaceGeometry):
    """The half-period K with Theta(phi(P_1) + ... + phi(P_{n-1}) - K) = 0.

    With a branch point as base point K is a half-period, so it is picked
    out of the 4^n candidates by testing the vanishing property on a few
    fixed (n-1)-point divisors.
    """
    from .theta import ThetaContext, theta

    n = geo.genus
    ctx = ThetaContext(geo.tau)
    s = geo.surface
    centre = complex(s.B.mean(), 0.0)
    probes = []
    for i in range(3):
        total = np.zeros(n, complex)
        for j in range(n - 1):
            ang = 0.7 + 1.9 * i + 2.3 * j
            z = centre + s.scale * (0.8 + 0.3 * j) * complex(math.cos(ang), math.sin(ang))
            total += geo.abel(SurfacePoint(z, 1 if (i + j) % 2 == 0 else -1))
        probes.append(total)
    shift = 0.1 * np.ones(n)
    chars = np.array(list(itertools.product((0, 1), repeat=2 * n)), dtype=float)
    Ks = 0.5 * (chars[:, :n] + chars[:, n:] @ geo.tau.T)
    P = np.array(probes)
    args = P[None, :, :] - Ks[:, None, :]
    ratio = np.abs(theta(ctx, args)) / np.abs(theta(ctx, args + shift))
    worst = ratio.max(axis=1)
    scores = [(float(worst[i]), tuple(int(b) for b in chars[i]), Ks[i]) for i in range(len(chars))]
    scores.sort(key=lambda item: item[0])
    best, second = scores[0], scores[1]
    report = {"vanishing_residual": float(best[0]), "runner_up": float(second[0]),
              "characteristic": list(best[1])}
    if best[0] > 1e-7 or second[0] < 1e-4:
        raise DegenerateSurfaceError("could not isolate the Riemann constants", **report)
    return best[2], report


def _cut_partial(geo, piece, phi0, phi1):
    if phi0 == phi1:
        return np.zeros(geo.genus, complex)
    part = CutTraverse(piece.k, piece.side, phi0, phi1, piece.sheet)
    return geo.surface.integrate([part], geo.differentials, order=24)
