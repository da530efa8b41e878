"""Finite-genus background q_alg, its matrix model M_alg, and the model
problems on sub-surfaces used by the long-time formulas.

The background is

    q(x, t) = (sum_k Im E_k) e^{2i(f0 x + g0 t)}
              Theta(phi_inf + d) Theta(phi_inf - c - d)
              / (Theta(phi_inf - d) Theta(phi_inf + c + d)),

    c = -(x Cf + t Cg + phases) / (2 pi),   d = phi(D) + K,

with phi_inf the Abel image of infinity on the upper sheet and (Cf, Cg) the
cut constants of f and g on cuts 1..n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import least_squares

from .errors import ConvergenceError, SchemaError, SingularityError
from .phase import PhaseModel
from .surface import BranchSet, Surface, SurfaceGeometry, SurfacePoint, build_surface, gauss_legendre
from .theta import ThetaContext, log_theta, theta_quotient

NEAR_POLE = 1e-12


def canonical_divisor(geo: SurfaceGeometry) -> list:
    """Upper-sheet points over the n real roots of prod(z - E_k) - prod(z - conj E_k).

    With this divisor the theta quotient is bounded for real (x, t), i.e. it
    yields a genuine solution of the focusing equation.
    """
    E = geo.branch.E
    if geo.genus == 0:
        return []
    poly = np.poly(E) - np.poly(E.conj())
    roots = np.sort(np.roots(poly[1:]).real)
    return [SurfacePoint(float(r), 1) for r in roots]


def nu(geo: SurfaceGeometry, z) -> complex:
    """Fourth root of prod (z - E_k)/(z - conj E_k), one principal root per cut."""
    z = complex(z)
    out = 1.0 + 0j
    for e in geo.branch.E:
        out *= ((z - e) / (z - np.conj(e))) ** 0.25
    return out


class ThetaModel:
    """Theta-quotient model on one surface, normalised to I at infinity.

    ``entry(c)`` is the residue coefficient (N_1)_12 = prefactor * quotient(c);
    ``matrix(z, c)`` is the model matrix itself.
    """

    def __init__(self, geo: SurfaceGeometry, divisor: list | None = None, prefactor: complex | None = None,
                 theta_tol: float = 1e-14):
        self.geo = geo
        n = geo.genus
        divisor = canonical_divisor(geo) if divisor is None else list(divisor)
        if len(divisor) != n:
            raise SchemaError("divisor must have genus-many points", expected=n, got=len(divisor))
        self.divisor = divisor
        self.ctx = ThetaContext(geo.tau, tol=theta_tol)
        self.phi_inf = geo.abel_infinity()
        self.d = sum((geo.abel(p) for p in divisor), np.zeros(n, complex)) + geo.riemann_K
        self.prefactor = complex(-0.5j * geo.branch.A.sum() if prefactor is None else prefactor)

    @property
    def genus(self) -> int:
        return self.geo.genus

    def quotient(self, c: np.ndarray, phi_point=None, d=None) -> complex:
        if self.genus == 0:
            return 1.0 + 0j
        p = self.phi_inf if phi_point is None else phi_point
        d = self.d if d is None else d
        den = log_theta(self.ctx, p - d), log_theta(self.ctx, p + c + d)
        if min(abs(np.exp(v.real)) for v in den) < NEAR_POLE:
            raise SingularityError("theta denominator is numerically zero (divisor hit)")
        return theta_quotient(self.ctx, [p + d, p - c - d], [p - d, p + c + d])

    @staticmethod
    def _reduce(c) -> np.ndarray:
        """Theta quotients are 1-periodic in each component of c."""
        c = np.asarray(c, dtype=float)
        return c - np.round(c)

    def entry(self, c: np.ndarray) -> complex:
        return self.prefactor * self.quotient(self._reduce(c))

    def _lambda(self, phi_z, c):
        d1, d2 = self.d, -self.d
        tq = lambda a, b: theta_quotient(self.ctx, [a], [b]) if self.genus else 1.0 + 0j
        return np.array([
            [tq(phi_z + c + d1, phi_z + d1), tq(-phi_z + c + d1, -phi_z + d1)],
            [tq(phi_z + c + d2, phi_z + d2), tq(-phi_z + c + d2, -phi_z + d2)],
        ])

    def matrix_from(self, phi_z: np.ndarray, nu_z: complex, c: np.ndarray) -> np.ndarray:
        c = self._reduce(c)
        lam = self._lambda(phi_z, c)
        lam_inf = self._lambda(self.phi_inf, c)
        a, b = nu_z + 1 / nu_z, nu_z - 1 / nu_z
        M = np.array([[a * lam[0, 0], b * lam[0, 1]], [b * lam[1, 0], a * lam[1, 1]]])
        return 0.5 * np.diag([1 / lam_inf[0, 0], 1 / lam_inf[1, 1]]) @ M

    def matrix(self, z: complex, c: np.ndarray) -> np.ndarray:
        """Model matrix at an off-cut point of the plane."""
        z = complex(z)
        if self.geo.surface.on_cut(z) is not None:
            raise SingularityError("the model matrix needs a side on the cuts; use matrix_boundary")
        return self.matrix_from(self.geo.abel(SurfacePoint(z)), nu(self.geo, z), c)

    def matrix_boundary(self, k: int, s: float, side: int, c: np.ndarray) -> np.ndarray:
        """One-sided value at B_k + i A_k s, -1 < s < 1; side +1 is the west side."""
        geo = self.geo
        phi = math.asin(s)
        z = geo.branch.B[k] + 1j * geo.branch.A[k] * s
        eps = 1e-13 * geo.surface.scale
        return self.matrix_from(geo.abel_on_cut(k, phi, side), nu(geo, z - side * eps), c)

    def jump(self, k: int, c: np.ndarray) -> np.ndarray:
        ck = 0.0 if k == 0 else c[k - 1]
        return np.array([[0, 1j * np.exp(2j * math.pi * ck)], [1j * np.exp(-2j * math.pi * ck), 0]])

    def jump_residual(self, k: int, c: np.ndarray, s: float = 0.3) -> float:
        plus = self.matrix_boundary(k, s, 1, c)
        minus = self.matrix_boundary(k, s, -1, c)
        return float(np.max(np.abs(plus - minus @ self.jump(k, c))))

    def residue_entry(self, c: np.ndarray, radius: float = 1e4) -> complex:
        """(N_1)_12 from two large-|z| samples of the model matrix (Richardson in 1/z)."""
        z = -1j * radius * self.geo.surface.scale
        m1 = self.matrix(z, c)[0, 1] * z
        m2 = self.matrix(2 * z, c)[0, 1] * 2 * z
        return complex(2 * m2 - m1)


@dataclass
class BackgroundParams:
    phases: np.ndarray
    divisor: list

    def __post_init__(self):
        self.phases = np.atleast_1d(np.asarray(self.phases, dtype=float))


class Background:
    """Theta-function background attached to one surface and phase model.

    q = 2i e^{2i(f0 x + g0 t)} (M_1)_12 with (M_1)_12 = -(i/2) (sum A_k) * quotient,
    i.e. q = (sum A_k) e^{2i(f0 x + g0 t)} * quotient.
    """

    def __init__(self, geo: SurfaceGeometry, phase: PhaseModel, params: BackgroundParams,
                 theta_tol: float = 1e-14):
        n = geo.genus
        if len(params.phases) != n and not (n == 0 and len(params.phases) <= 1):
            raise SchemaError("need one phase per cut 1..n", expected=n, got=len(params.phases))
        if len(params.divisor) != n:
            raise SchemaError("divisor must have genus-many points", expected=n, got=len(params.divisor))
        self.geo, self.phase, self.params = geo, phase, params
        self.model = ThetaModel(geo, params.divisor, theta_tol=theta_tol)
        self.ctx = self.model.ctx
        self.phi_inf = self.model.phi_inf
        self.d = self.model.d
        self.amplitude = float(geo.branch.A.sum())
        self.phases = params.phases[:n]

    @property
    def genus(self) -> int:
        return self.geo.genus

    def c(self, x: float, t: float) -> np.ndarray:
        ph = self.phase
        return -(x * ph.Cf[1:] + t * ph.Cg[1:] + self.phases) / (2 * math.pi)

    def carrier(self, x, t):
        return np.exp(2j * (self.phase.f0 * np.asarray(x) + self.phase.g0 * np.asarray(t)))

    def quotient(self, c: np.ndarray, phi_point=None, d=None) -> complex:
        return self.model.quotient(c, phi_point, d)

    def q(self, x: float, t: float) -> complex:
        return complex(self.amplitude * self.carrier(x, t) * self.quotient(self.c(x, t)))

    def q_grid(self, xs, ts) -> np.ndarray:
        xs, ts = np.asarray(xs, float), np.asarray(ts, float)
        out = np.empty((xs.size, ts.size), complex)
        for i, x in enumerate(xs):
            for j, t in enumerate(ts):
                out[i, j] = self.q(x, t)
        return out

    # ------------------------------------------------------------- M_alg

    def m_alg_from(self, phi_z: np.ndarray, nu_z: complex, x: float, t: float) -> np.ndarray:
        return self.model.matrix_from(phi_z, nu_z, self.c(x, t))

    def m_alg(self, z: complex, x: float, t: float) -> np.ndarray:
        """M_alg at an off-cut point of the plane."""
        return self.model.matrix(z, self.c(x, t))

    def m_alg_boundary(self, k: int, s: float, side: int, x: float, t: float) -> np.ndarray:
        """One-sided value at B_k + i A_k s, -1 < s < 1; side +1 is the west side."""
        return self.model.matrix_boundary(k, s, side, self.c(x, t))

    def jump(self, k: int, x: float, t: float) -> np.ndarray:
        return self.model.jump(k, self.c(x, t))

    def q_from_m_alg(self, x: float, t: float, radius: float = 1e4) -> complex:
        """2i e^{2i(f0 x + g0 t)} times the residue at infinity of (M_alg)_12."""
        return complex(2j * self.carrier(x, t) * self.model.residue_entry(self.c(x, t), radius))


def q_alg(geo: SurfaceGeometry, phase: PhaseModel, params: BackgroundParams, x: float, t: float) -> complex:
    return Background(geo, phase, params).q(x, t)


def m_alg(geo: SurfaceGeometry, phase: PhaseModel, params: BackgroundParams,
          z: SurfacePoint, x: float, t: float) -> np.ndarray:
    if z.sheet != 1:
        raise SchemaError("M_alg is a function on the plane; pass an upper-sheet point")
    return Background(geo, phase, params).m_alg(z.z, x, t)


# --------------------------------------------------------------------------
# odd-genus model on the constant-jump cuts


class OddModel:
    """Model problem on the cuts k > [n/2] with alpha-shifted phases.

    c~_k = -c_k - alpha_k / pi on the non-base cuts; prefactor -(i/2) sum A_k over the subset.
    """

    def __init__(self, background: Background, alphas, theta_tol: float = 1e-14):
        n = background.genus
        if n % 2 != 1:
            raise SchemaError("the odd model needs odd genus", genus=n)
        self.background = background
        self.cuts = [k for k in range(n + 1) if k > n // 2]
        self.alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
        if len(self.alphas) != len(self.cuts) - 1:
            raise SchemaError("need one alpha per non-base constant-jump cut",
                              expected=len(self.cuts) - 1, got=len(self.alphas))
        sub = BranchSet(tuple(background.geo.branch.E[self.cuts]))
        self.geo = build_surface(sub, background.geo.surface.quad_order)
        self.model = ThetaModel(self.geo, theta_tol=theta_tol)

    def c_tilde(self, x: float, t: float) -> np.ndarray:
        c = self.background.c(x, t)
        return np.array([-c[k - 1] for k in self.cuts[1:]]) - self.alphas / math.pi

    def Q(self, x: float, t: float) -> complex:
        return self.model.entry(self.c_tilde(x, t))

    def matrix(self, z: complex, x: float, t: float) -> np.ndarray:
        return self.model.matrix(z, self.c_tilde(x, t))


def model_odd(background: Background, alphas, theta_tol: float = 1e-14) -> OddModel:
    return OddModel(background, alphas, theta_tol)


# --------------------------------------------------------------------------
# even genus: extended surface and its model


@dataclass
class ExtendedSurfaceData:
    """Two added branch points and the regularized phase differential.

    d theta = p(z) R4(z) / w_ext(z) dz with R4 = |z - E00|^2 |z - E01|^2 (as a polynomial)
    and w_ext the radical of the extended branch set; p has degree n, leading 4.
    """

    E00: complex
    E01: complex
    p_coeffs: np.ndarray
    beta_minus: complex
    beta_plus: complex
    residual: float
    converged: bool
    mode: str
    xi: float
    diagnostics: dict = field(default_factory=dict)

    def branch(self, base: BranchSet) -> BranchSet:
        return BranchSet(tuple(base.E) + (complex(self.E00), complex(self.E01)))

    def to_json(self) -> dict:
        c = lambda v: [float(np.real(v)), float(np.imag(v))]
        return {"E00": c(self.E00), "E01": c(self.E01), "p_coeffs": [float(v) for v in self.p_coeffs],
                "beta_minus": c(self.beta_minus), "beta_plus": c(self.beta_plus), "xi": self.xi,
                "residual": self.residual, "converged": self.converged, "mode": self.mode,
                "diagnostics": self.diagnostics}


def _check_gap(base: BranchSet, E00: complex, E01: complex):
    n = base.genus
    if n % 2:
        raise SchemaError("the extended surface is built for even genus", genus=n)
    lo = base.B[n // 2 - 1] if n >= 2 else -math.inf
    hi = base.B[n // 2]
    if not (lo < E01.real < E00.real < hi) or E00.imag <= 0 or E01.imag <= 0:
        raise SchemaError("need B_{n/2-1} < Re E01 < Re E00 < B_{n/2} with both points in the upper half plane",
                          E00=[E00.real, E00.imag], E01=[E01.real, E01.imag], gap=[lo, hi])


def _r4(E00: complex, E01: complex) -> np.ndarray:
    return np.real(npoly.polyfromroots([E00, np.conj(E00), E01, np.conj(E01)]))


def _arc_integral(surf: Surface, coeffs: np.ndarray, a: complex, b: complex, order: int = 64) -> complex:
    """Integral of num/w_ext along the straight segment a -> b between two branch points."""
    x, wt = gauss_legendre(order)
    u = 0.5 * (1 - np.cos(math.pi * x))
    du = 0.5 * math.pi * np.sin(math.pi * x)
    z = a + (b - a) * u
    return complex(np.sum(npoly.polyval(z, coeffs) / surf.w(z) * (b - a) * du * wt))


def extended_system(base: BranchSet, xi: float, E00: complex, E01: complex, quad_order: int = 32):
    """Solve the linear part (coefficients of p) and return the scaled residual vector.

    Conditions: every cut integral vanishes except on the E01 cut; the integral
    along the arc E01 -> E00 is real; d theta = (4z + xi + O(z^-2)) dz.
    """
    E00, E01 = complex(E00), complex(E01)
    _check_gap(base, E00, E01)
    n = base.genus
    ext = BranchSet(tuple(base.E) + (E00, E01))
    surf = Surface(ext, quad_order)
    R4 = _r4(E00, E01)
    basis = [npoly.polymul(R4, [0] * i + [1]) for i in range(n + 1)]
    rows, rhs = [], []
    i01 = int(np.argmin(np.abs(ext.E - E01)))
    for k in range(n + 3):
        if k == i01:
            continue
        vals = [complex(surf.cut_integral(k, lambda z, w, b=b: npoly.polyval(z, b) / w)) for b in basis]
        rows += [[v.real for v in vals[:n]], [v.imag for v in vals[:n]]]
        rhs += [-4 * vals[n].real, -4 * vals[n].imag]
    arc = [_arc_integral(surf, b, E01, E00) for b in basis]
    rows.append([v.imag for v in arc[:n]])
    rhs.append(-4 * arc[n].imag)
    for order, target in ((0, xi), (-1, 0.0)):
        vals = []
        for b in basis:
            ex, co = surf.laurent(b, 24)
            m = co[ex == order]
            vals.append(complex(m[0]) if m.size else 0j)
        rows += [[v.real for v in vals[:n]], [v.imag for v in vals[:n]]]
        rhs += [target - 4 * vals[n].real, -4 * vals[n].imag]
    A = np.array(rows, dtype=float).reshape(len(rows), n)
    b = np.array(rhs, dtype=float)
    sc = np.linalg.norm(A, axis=1) + np.abs(b) + (1.0 if n == 0 else 0.0)
    sc[sc < 1e-14] = 1.0
    sol = np.linalg.lstsq(A / sc[:, None], b / sc, rcond=None)[0] if n else np.zeros(0)
    resid = (A @ sol - b) / sc
    return np.concatenate([sol, [4.0]]), resid, surf


def regularized_dtheta(surf: Surface, p_coeffs: np.ndarray, E00: complex, E01: complex, z):
    z = np.asarray(z, dtype=complex)
    return npoly.polyval(z, npoly.polymul(p_coeffs, _r4(E00, E01))) / surf.w(z)


def regularized_dtheta_prime(surf: Surface, p_coeffs: np.ndarray, E00: complex, E01: complex, z) -> complex:
    """Derivative of d theta/dz, the second derivative of the regularized phase."""
    z = complex(z)
    num = npoly.polymul(p_coeffs, _r4(E00, E01))
    F = npoly.polyval(z, num) / complex(surf.w(z))
    logw = 0.5 * np.sum(1.0 / (z - surf.branch_points))
    return npoly.polyval(z, npoly.polyder(num)) / complex(surf.w(z)) - F * logw


def validate_extended(geo: SurfaceGeometry, phase: PhaseModel, xi: float, E00: complex, E01: complex,
                      mode: str = "validation") -> ExtendedSurfaceData:
    """Evaluate the extended-surface conditions at given points (no solve)."""
    base = geo.branch
    E00, E01 = complex(E00), complex(E01)
    p, resid, surf = extended_system(base, xi, E00, E01, geo.surface.quad_order)
    num = npoly.polymul(p, _r4(E00, E01))
    func = lambda z, w: npoly.polyval(z, num) / w
    shift = -xi * phase.f0 - phase.g0
    beta_minus = complex(surf.integrate(surf.path_to(E00), func)) + shift
    beta_plus = _arc_integral(surf, num, E01, E00)
    err = float(np.max(np.abs(resid), initial=0.0))
    degenerate = min(E00.imag, E01.imag, abs(E00 - E01)) < 1e-3 * surf.scale
    diag = {"condition_residuals": resid.tolist(), "beta_minus_imag": beta_minus.imag,
            "beta_plus_imag": beta_plus.imag, "degenerate": bool(degenerate),
            "p_real_roots": sorted(float(r.real) for r in np.roots(p[::-1]) if abs(r.imag) < 1e-8)}
    ok = err < 1e-8 and not degenerate
    return ExtendedSurfaceData(E00, E01, p, beta_minus, beta_plus, err, ok, mode, float(xi), diag)


def default_extended_seed(geo: SurfaceGeometry, phase: PhaseModel, xi: float) -> tuple[complex, complex]:
    """Seed from the complex stationary point nearest the gap where the new cuts go."""
    base, n = geo.branch, geo.genus
    lo = base.B[n // 2 - 1] if n >= 2 else base.B[0] - 2 * max(base.A.max(), 1.0)
    hi = base.B[n // 2]
    roots = np.roots(phase.h(xi)[::-1])
    upper = [r for r in roots if r.imag > 1e-6]
    mid = 0.5 * (lo + hi)
    E00 = min(upper, key=lambda r: abs(r.real - mid)) if upper else complex(mid, 0.5 * base.A.mean())
    x00 = float(np.clip(E00.real, lo + 0.6 * (hi - lo), hi - 0.1 * (hi - lo)))
    x01 = lo + 0.3 * (hi - lo)
    return complex(x00, abs(E00.imag)), complex(x01, 0.5 * abs(E00.imag))


def solve_extended(geo: SurfaceGeometry, phase: PhaseModel, xi: float, seed: tuple | None = None,
                   max_nfev: int = 50) -> ExtendedSurfaceData:
    """Nonlinear least squares for (E00, E01); raises ConvergenceError with diagnostics on failure."""
    base, n = geo.branch, geo.genus
    if n % 2:
        raise SchemaError("the extended surface is built for even genus", genus=n)
    lo = base.B[n // 2 - 1] if n >= 2 else base.B[0] - 10 * max(base.A.max(), 1.0)
    hi = base.B[n // 2]
    E00, E01 = seed if seed is not None else default_extended_seed(geo, phase, xi)
    eps = 1e-6 * (hi - lo)

    def F(v):
        a, b = complex(v[0], v[1]), complex(v[2], v[3])
        if not (b.real < a.real):
            return np.full(2 * n + 9, 10.0)
        return extended_system(base, xi, a, b, geo.surface.quad_order)[1]
    x0 = [E00.real, E00.imag, E01.real, E01.imag]
    res = least_squares(F, x0, bounds=([lo + eps, 1e-6, lo + eps, 1e-6], [hi - eps, np.inf, hi - eps, np.inf]),
                        max_nfev=max_nfev, xtol=1e-14, ftol=1e-14, gtol=1e-14)
    out = validate_extended(geo, phase, xi, complex(res.x[0], res.x[1]), complex(res.x[2], res.x[3]), "solved")
    out.diagnostics["nfev"] = int(res.nfev)
    if not out.converged:
        raise ConvergenceError("extended-surface solve did not converge to a non-degenerate solution; "
                               "supply (E00, E01) and use validation mode",
                               residual=out.residual, best=out.to_json(), seed=[list(map(float, x0))])
    return out


class EvenModel:
    """Theta model on the extended surface with the shifted phase vector c_hat."""

    def __init__(self, background: Background, ext: ExtendedSurfaceData, alphas, theta_tol: float = 1e-14,
                 geometry: SurfaceGeometry | None = None):
        n = background.genus
        if n % 2:
            raise SchemaError("the even model needs even genus", genus=n)
        self.background, self.ext = background, ext
        self.alphas = np.asarray(alphas, dtype=float)
        if self.alphas.shape != (4,):
            raise SchemaError("need four alphas (a1, a2, a3, a4)", got=self.alphas.tolist())
        branch = ext.branch(background.geo.branch)
        if geometry is not None and not np.allclose(geometry.branch.E, branch.E):
            raise SchemaError("geometry does not match the extended branch set")
        self.geo = geometry if geometry is not None else build_surface(branch, background.geo.surface.quad_order)
        E = background.geo.branch.E
        pref = -0.5j * float(np.sum(E.imag) + ext.E00.imag + ext.E01.imag)
        self.model = ThetaModel(self.geo, prefactor=pref, theta_tol=theta_tol)
        self.beta = float(np.real(ext.beta_minus))

    def c_hat(self, x: float, t: float) -> np.ndarray:
        n = self.background.genus
        a1, a2, a3, _ = self.alphas
        c = np.concatenate([[0.0], self.background.c(x, t)])  # reference cut carries no phase
        shared = -(t * self.beta + a1) / math.pi
        out = []
        for j in range(1, n + 3):
            if j < n // 2:
                out.append(-c[j] - a3 / math.pi)
            elif j == n // 2:
                out.append(shared)
            elif j == n // 2 + 1:
                out.append(-a2 / math.pi + shared)
            else:
                out.append(-c[j - 2] - a2 / math.pi)
        return np.array(out)

    def Q(self, x: float, t: float) -> complex:
        return self.model.entry(self.c_hat(x, t))

    def matrix(self, z: complex, x: float, t: float) -> np.ndarray:
        return self.model.matrix(z, self.c_hat(x, t))


def model_even(background: Background, ext: ExtendedSurfaceData, alphas, theta_tol: float = 1e-14,
               geometry: SurfaceGeometry | None = None) -> EvenModel:
    return EvenModel(background, ext, alphas, theta_tol, geometry)
