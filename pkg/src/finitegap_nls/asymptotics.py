"""Leading-order long-time formulas on top of a finite-genus background.

Odd genus, transition zone |xi - xi_j| t^{2/3} <= C around a collision xi_j:

    q ~ -delta_inf^2 e^{2i(f0 x + g0 t)} Qtilde
        + 2 e^{2i(f0 x + g0 t)} delta_inf^2 u(varpi) (theta'''(z_j) t)^{-1/3}

with u the Hastings-McLeod type solution of u'' = p u + 2 u^3, u ~ a Ai(p),
a = Im rho. Even genus, |xi| < d with two simple real stationary points:

    q ~ 2i e^{2i(f0 x + g0 t)} e^{2(log delta_inf + i g_inf)} [(E1)_12 + Qhat]

with (E1)_12 = sum_j (a_j^2 beta12_j - b_j^2 conj beta12_j) / (2i sqrt(t) psi_j),
(a_j, b_j) the first row of the even model matrix at kappa_j.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .background import (Background, EvenModel, ExtendedSurfaceData, model_odd, regularized_dtheta_prime,
                         solve_extended, validate_extended)
from .cauchy import DeltaModel, GFunction, build_delta, delta_contour, g_even, g_odd, pc_local_data
from .errors import DomainError, RegimeError, SchemaError, SingularityError
from .phase import CollisionEvent, find_collisions, stationary_points, theta_derivative
from .scattering import ScatteringData
from .special import HM_FLOOR, HM_START, HMState, airy, pc_beta
from .surface import Surface, build_surface, gauss_legendre


def _c(v) -> list:
    v = complex(v)
    return [v.real, v.imag]


@dataclass
class RegimeParams:
    C: float = 1.0
    d: float | None = None  # None -> 0.25 * min |xi_collision|

    def __post_init__(self):
        if not self.C > 0:
            raise SchemaError("regime C must be positive", C=self.C)
        if self.d is not None and not self.d > 0:
            raise SchemaError("regime d must be positive", d=self.d)


@dataclass
class AsymptoticBundle:
    regime: str
    x: float
    t: float
    xi: float
    delta_inf: complex
    I1: complex
    g_inf: complex
    I2: complex
    Q: complex
    background_part: complex
    correction: complex
    leading: complex
    error_order: str
    varpi: float | None = None
    lambda_scale: float | None = None
    rho: complex | None = None
    hm_amplitude: float | None = None
    u: float | None = None
    kappas: list = field(default_factory=list)
    nu: list = field(default_factory=list)
    beta12: list = field(default_factory=list)
    beta21: list = field(default_factory=list)
    pc_magnitudes: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"regime": self.regime, "x": self.x, "t": self.t, "xi": self.xi,
               "delta_inf": _c(self.delta_inf), "I1": _c(self.I1), "g_inf": _c(self.g_inf), "I2": _c(self.I2),
               "Q": _c(self.Q), "background_part": _c(self.background_part), "correction": _c(self.correction),
               "leading": _c(self.leading), "error_order": self.error_order}
        if self.regime == "painleve_odd":
            out.update(varpi=self.varpi, lambda_scale=self.lambda_scale, rho=_c(self.rho),
                       hm_amplitude=self.hm_amplitude, u=self.u)
        else:
            out.update(kappas=self.kappas, nu=self.nu, beta12=[_c(b) for b in self.beta12],
                       beta21=[_c(b) for b in self.beta21], pc_magnitudes=self.pc_magnitudes)
        out["diagnostics"] = self.diagnostics
        return out


# ------------------------------------------------------------ local scaling


def varpi_lambda(collision: CollisionEvent, phase, xi: float, t: float, z: complex = None) -> tuple[float, complex]:
    """Painleve variable and the rescaled spectral variable at z (None -> lambda scale only).

    varpi = 2 theta'(z_j) t^{2/3} / theta'''(z_j)^{1/3},  lambda = (theta''' t / 8)^{1/3} (z - z_j),
    with real cube roots so both stay continuous through xi_j.
    """
    if not t > 0:
        raise DomainError("t must be positive", t=t)
    t3 = float(np.real(collision.theta3))
    if abs(t3) < 1e-3:
        raise SingularityError("theta''' vanishes at the collision point", theta3=t3)
    t1 = float(np.real(theta_derivative(phase, collision.z_j, xi, 1)))
    varpi = 2 * t1 * t ** (2 / 3) / np.cbrt(t3)
    scale = float(np.cbrt(t3 * t / 8))
    lam = None if z is None else scale * (complex(z) - collision.z_j)
    return float(varpi), (scale if lam is None else lam)


def xi_at_varpi(collision: CollisionEvent, phase, varpi: float, t: float) -> float:
    """Invert varpi(xi) at fixed t (theta' is affine in xi at fixed z)."""
    z = collision.z_j
    a = float(np.real(theta_derivative(phase, z, 0.0, 1)))
    b = float(np.real(theta_derivative(phase, z, 1.0, 1))) - a
    t1 = varpi * np.cbrt(float(np.real(collision.theta3))) / (2 * t ** (2 / 3))
    return (t1 - a) / b


def phase_increment(phase, xi: float, z0: float, z: complex, order: int = 32) -> complex:
    """theta(z) - theta(z0) by Gauss-Legendre along the segment (no branch point on it)."""
    x, w = gauss_legendre(order)
    s = z0 + x * (complex(z) - z0)
    vals = theta_derivative(phase, s, xi, 1)
    return complex(np.sum(w * vals) * (complex(z) - z0))


def cubic_residual(collision: CollisionEvent, phase, xi: float, t: float, lam: complex) -> complex:
    """t theta(z) - t theta(z_j) - (4/3) lambda^3 - varpi lambda at z = z_j + lambda / scale."""
    varpi, scale = varpi_lambda(collision, phase, xi, t)
    z = collision.z_j + complex(lam) / scale
    return t * phase_increment(phase, xi, collision.z_j, z) - (4 / 3) * complex(lam) ** 3 - varpi * complex(lam)


# ------------------------------------------------------------ assembly


class AsymptoticSolver:
    """Caches the xi-independent pieces (delta, g, model problems) per collision or per xi."""

    def __init__(self, background: Background, scattering: ScatteringData, regime: RegimeParams | None = None,
                 extended: tuple | None = None):
        self.bg = background
        self.geo = background.geo
        self.phase = background.phase
        self.scattering = scattering
        self.regime = regime or RegimeParams()
        self.extended_points = None if extended is None else (complex(extended[0]), complex(extended[1]))
        self.collisions = find_collisions(self.phase)
        self._odd: dict = {}
        self._even: dict = {}
        self._ext_geo = None

    @property
    def genus(self) -> int:
        return self.geo.genus

    @property
    def d(self) -> float:
        if self.regime.d is not None:
            return self.regime.d
        xs = [abs(c.xi_j) for c in self.collisions if abs(c.xi_j) > 0]
        return 0.25 * min(xs) if xs else 1.0

    # ---------------------------------------------------------------- odd

    def nearest_collision(self, xi: float) -> CollisionEvent:
        if not self.collisions:
            raise RegimeError("the phase has no collision points", genus=self.genus)
        return min(self.collisions, key=lambda c: abs(xi - c.xi_j))

    def odd_data(self, col: CollisionEvent) -> dict:
        key = round(col.xi_j, 12)
        if key in self._odd:
            return self._odd[key]
        branch = self.geo.branch
        B = branch.B
        portrait = stationary_points(self.phase, col.xi_j)
        right = [b for b in B if b > col.z_j]
        k3 = None
        if len(right) >= 2:
            lo, hi = right[0], right[1]
            cands = [p for p in portrait.real_points if abs(p - col.z_j) > 1e-3 and lo < p < hi]
            k3 = max(cands) if cands else None
        intervals = delta_contour("odd", branch, (col.z_j, col.z_j, k3))
        delta = build_delta("odd", branch, self.scattering, intervals)
        g = g_odd(delta)
        om = model_odd(self.bg, g.alphas)
        r = complex(self.scattering.r(col.z_j))
        if self.scattering.is_zero:
            rho = 0j
        else:
            log_dp = delta.nu_sign * delta.log_nu(col.z_j) + delta.boundary_exponent(col.z_j, 1)
            rho = 1j * r.conjugate() * cmath.exp(2 * log_dp) / (1 + abs(r) ** 2)
        a = float(rho.imag)
        out = {"delta": delta, "g": g, "model": om, "rho": rho, "a": a, "hm": HMState(a),
               "intervals": intervals, "kappa3": k3}
        self._odd[key] = out
        return out

    def q_painleve_odd(self, x: float, t: float) -> AsymptoticBundle:
        if self.genus % 2 == 0:
            raise RegimeError("the Painleve formula needs odd genus", genus=self.genus)
        if not t > 0:
            raise DomainError("t must be positive", t=t)
        xi = x / t
        col = self.nearest_collision(xi)
        gate = abs(xi - col.xi_j) * t ** (2 / 3)
        if gate > self.regime.C:
            half = self.regime.C * t ** (-2 / 3)
            raise RegimeError("(x, t) lies outside the transition zone",
                              xi=xi, nearest_xi_j=col.xi_j, window=[col.xi_j - half, col.xi_j + half],
                              gate=gate, C=self.regime.C)
        data = self.odd_data(col)
        varpi, scale = varpi_lambda(col, self.phase, xi, t)
        if varpi < HM_FLOOR:
            raise DomainError("varpi below the tabulated range of the Painleve solution", varpi=varpi)
        u = data["hm"](varpi)[0] if varpi <= HM_START else data["a"] * float(airy(varpi))
        delta: DeltaModel = data["delta"]
        g: GFunction = data["g"]
        carrier = complex(self.bg.carrier(x, t))
        d2 = delta.delta_inf ** 2
        Qt = data["model"].Q(x, t)
        t3 = float(np.real(col.theta3))
        bgp = -d2 * carrier * Qt
        corr = 2 * carrier * d2 * u / np.cbrt(t3 * t)
        diag = {"collision": {"z_j": col.z_j, "xi_j": col.xi_j, "theta3": t3}, "gate": gate,
                "delta_intervals": [[a, b] for a, b in data["intervals"]],
                "delta_moment_residual": delta.moment_residual, "g_report": g.report}
        return AsymptoticBundle("painleve_odd", float(x), float(t), xi, delta.delta_inf, delta.I1, g.g_inf, g.I2,
                                Qt, bgp, corr, bgp + corr, "t^-1/2", varpi=varpi, lambda_scale=scale,
                                rho=data["rho"], hm_amplitude=data["a"], u=float(u), diagnostics=diag)

    # ---------------------------------------------------------------- even

    def _extended(self, xi: float) -> ExtendedSurfaceData:
        if self.extended_points is not None:
            return validate_extended(self.geo, self.phase, xi, *self.extended_points)
        return solve_extended(self.geo, self.phase, xi)

    def _even_kappas(self, xi: float, ext: ExtendedSurfaceData) -> tuple[list, str]:
        roots = ext.diagnostics.get("p_real_roots", [])
        if ext.converged and len(roots) == 2:
            return list(roots), "regularized"
        pts = stationary_points(self.phase, xi).real_points
        if len(pts) != 2:
            raise RegimeError("need exactly two simple real stationary points", xi=xi, real_points=pts)
        return list(pts), "base"

    def even_data(self, xi: float) -> dict:
        key = round(xi, 12)
        if key in self._even:
            return self._even[key]
        ext = self._extended(xi)
        kappas, source = self._even_kappas(xi, ext)
        branch = self.geo.branch
        ext_branch = ext.branch(branch)
        if self._ext_geo is None or not np.allclose(self._ext_geo.branch.E, ext_branch.E):
            self._ext_geo = build_surface(ext_branch, self.geo.surface.quad_order)
        intervals = delta_contour("even", branch, kappas)
        delta = build_delta("even", branch, self.scattering, intervals)
        ext_surf = self._ext_geo.surface
        g = g_even(delta, ext_surf, self.scattering, ext.E00, ext.E01, kappas[0])
        em = EvenModel(self.bg, ext, g.alphas, geometry=self._ext_geo)
        locals_ = []
        pts = np.concatenate([ext_branch.E, np.conj(ext_branch.E)])
        for j, k in enumerate(kappas):
            if source == "regularized":
                th2 = float(np.real(regularized_dtheta_prime(ext_surf, ext.p_coeffs, ext.E00, ext.E01, k)))
            else:
                th2 = float(np.real(theta_derivative(self.phase, k, xi, 2)))
            others = [abs(k - o) for o in kappas if o != k] + list(np.abs(pts - k))
            eps = 0.25 * min(others)
            angle = 0.75 * math.pi if j == 0 else 0.25 * math.pi
            data, _ = pc_local_data(delta, self.scattering, k, th2, k + eps * cmath.exp(1j * angle))
            locals_.append(data)
        out = {"ext": ext, "kappas": kappas, "kappa_source": source, "delta": delta, "g": g, "model": em,
               "local": locals_, "intervals": intervals}
        self._even[key] = out
        return out

    def q_pc_even(self, x: float, t: float) -> AsymptoticBundle:
        if self.genus % 2:
            raise RegimeError("the parabolic-cylinder formula needs even genus", genus=self.genus)
        if not t > 0:
            raise DomainError("t must be positive", t=t)
        xi = x / t
        d = self.d
        if not abs(xi) < d:
            raise RegimeError("(x, t) lies outside the parabolic-cylinder sector", xi=xi, window=[-d, d])
        data = self.even_data(xi)
        delta: DeltaModel = data["delta"]
        g: GFunction = data["g"]
        em: EvenModel = data["model"]
        carrier = complex(self.bg.carrier(x, t))
        g_inf = complex(g.g_inf)
        factor = cmath.exp(2 * (cmath.log(delta.delta_inf) + 1j * g_inf))
        Qh = em.Q(x, t)
        E1 = 0j
        b12s, b21s, mags, nus = [], [], [], []
        for loc in data["local"]:
            b12, b21 = pc_beta(loc.r_eff(t), loc.nu)
            N = em.matrix(complex(loc.kappa), x, t)
            a, b = N[0, 0], N[0, 1]
            den = 2j * math.sqrt(t) * loc.psi0
            E1 += (a * a * b12 - b * b * b12.conjugate()) / den
            b12s.append(b12)
            b21s.append(b21)
            mags.append(abs(b12) / abs(den))
            nus.append(loc.nu)
        bgp = 2j * carrier * factor * Qh
        corr = 2j * carrier * factor * E1
        ext = data["ext"]
        diag = {"extended": {"residual": ext.residual, "converged": ext.converged, "mode": ext.mode},
                "kappa_source": data["kappa_source"], "d": d,
                "delta_intervals": [[a, b] for a, b in data["intervals"]],
                "delta_moment_residual": delta.moment_residual, "g_report": g.report}
        return AsymptoticBundle("pc_even", float(x), float(t), xi, delta.delta_inf, delta.I1, g_inf, g.I2, Qh,
                                bgp, corr, bgp + corr, "ln t / t", kappas=list(data["kappas"]), nu=nus,
                                beta12=b12s, beta21=b21s, pc_magnitudes=mags, diagnostics=diag)

    def evaluate(self, x: float, t: float, mode: str | None = None) -> AsymptoticBundle:
        mode = mode or ("odd" if self.genus % 2 else "even")
        if mode == "odd":
            return self.q_painleve_odd(x, t)
        if mode == "even":
            return self.q_pc_even(x, t)
        raise SchemaError("mode must be odd or even", mode=mode)
