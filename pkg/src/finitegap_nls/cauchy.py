"""Scalar Cauchy-integral functions: delta, the g-function, and the local data
feeding the parabolic-cylinder parametrix.

Every function here has the shape

    F(z) = W(z) / (2 pi i) * sum_p  int_p rho_p(s) / (s - z) ds

where W is a radical over a subset of the cuts (or 1) and each rho_p is a
density on an oriented piece p: a real segment, a ray to infinity, one half
of a vertical cut, or a straight arc. Pieces are integrated with Gauss-Legendre
panels refined until the evaluation point lies outside a Bernstein ellipse of
parameter 3.5 around every panel, so values stay accurate right up to the
contour. Boundary values are limits from offsets of 1e-6 * scale, combined by
Richardson extrapolation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContourProximityError, InconsistentSystemError, SchemaError, SingularityError
from .scattering import ScatteringData
from .surface import HALF_PI, BranchSet, Surface, SurfaceGeometry, gauss_legendre

PANEL_ORDER = 16
BERNSTEIN = 3.5
MAX_DEPTH = 60
OFFSET = 1e-6
TWO_PI_I = 2j * math.pi


def log_cut(v, theta: float):
    """log v with its branch cut along the ray of direction angle theta; arg in (theta - 2pi, theta)."""
    v = np.asarray(v, dtype=complex)
    rot = cmath.exp(-1j * (theta - math.pi))
    return np.log(v * rot) + 1j * (theta - math.pi)


# --------------------------------------------------------------------------
# pieces and the adaptive Cauchy sum


@dataclass(frozen=True)
class Piece:
    """One oriented integration piece.

    kind "segment": a -> b.  kind "ray": from a towards infinity along the unit
    vector ``b`` (orientation outward if ``outward`` else inward).  kind "cut":
    radical cut ``cut`` traversed upward from phi0 to phi1.
    ``denom`` is "plain" for numer/W, "plus" for numer/W_+ on the piece's own
    cut, "none" for numer alone.
    """

    kind: str
    numer: Callable
    a: complex = 0j
    b: complex = 0j
    denom: str = "plain"
    cut: int = -1
    phi0: float = 0.0
    phi1: float = 0.0
    length: float = 1.0
    outward: bool = False
    tag: str = ""

    def start(self) -> complex | None:
        if self.kind == "segment":
            return self.a
        if self.kind == "ray":
            return self.a if self.outward else None
        return None

    def end(self) -> complex | None:
        if self.kind == "segment":
            return self.b
        if self.kind == "ray":
            return None if self.outward else self.a
        return None


class CauchySum:
    """F(z) = W(z)/(2 pi i) * sum_p int_p rho_p(s)/(s - z) ds."""

    def __init__(self, pieces: list, radical: Surface | None = None, scale: float = 1.0):
        self.pieces = list(pieces)
        self.radical = radical
        self.scale = float(scale)
        self._cache: dict = {}

    # geometry of a piece in its parameter u in [0, 1]
    def _geom(self, p: Piece, u: np.ndarray):
        if p.kind == "segment":
            return p.a + (p.b - p.a) * u, np.full(u.shape, p.b - p.a, dtype=complex), None
        if p.kind == "ray":
            s = p.a + p.b * p.length * (1.0 / u - 1.0)
            ds = -p.b * p.length / (u * u)
            return s, (-ds if p.outward else ds), None
        B, A = self.radical.B[p.cut], self.radical.A[p.cut]
        phi = p.phi0 + (p.phi1 - p.phi0) * u
        return B + 1j * A * np.sin(phi), 1j * A * np.cos(phi) * (p.phi1 - p.phi0), phi

    def _preimage(self, p: Piece, z: complex) -> complex:
        if p.kind == "segment":
            return (z - p.a) / (p.b - p.a)
        if p.kind == "ray":
            den = 1.0 + (z - p.a) / (p.b * p.length)
            return 1.0 / den if den != 0 else complex(math.inf)
        B, A = self.radical.B[p.cut], self.radical.A[p.cut]
        phi = cmath.asin((z - B) / (1j * A))
        return (phi - p.phi0) / (p.phi1 - p.phi0)

    def _density(self, p: Piece, s: np.ndarray, phi):
        num = np.asarray(p.numer(s), dtype=complex)
        if p.denom == "none" or self.radical is None:
            return num
        if p.denom == "plus":
            return num / self.radical.w_on_cut(p.cut, phi, 1)
        return num / self.radical.w(s)

    def _panel(self, idx: int, u0: float, u1: float):
        key = (idx, u0, u1)
        hit = self._cache.get(key)
        if hit is None:
            x, wt = gauss_legendre(PANEL_ORDER)
            u = u0 + (u1 - u0) * x
            p = self.pieces[idx]
            s, ds, phi = self._geom(p, u)
            hit = (s, ds * wt * (u1 - u0) * self._density(p, s, phi))
            if len(self._cache) < 200000:
                self._cache[key] = hit
        return hit

    @staticmethod
    def _bernstein(uz: complex, u0: float, u1: float) -> float:
        h = 0.5 * (u1 - u0)
        t = (uz - (u0 + h)) / h
        r = cmath.sqrt(t - 1) * cmath.sqrt(t + 1)
        return max(abs(t + r), abs(t - r))

    def _panels(self, idx: int, z: complex | None):
        p = self.pieces[idx]
        init = [0.0, 0.25, 0.5, 0.75, 1.0]
        stack = [(a, b, 0) for a, b in zip(init, init[1:])]
        if z is None:
            return [(a, b) for a, b, _ in stack]
        uz = self._preimage(p, z)
        out = []
        while stack:
            a, b, depth = stack.pop()
            if (not cmath.isfinite(uz)) or depth >= MAX_DEPTH or self._bernstein(uz, a, b) >= BERNSTEIN:
                out.append((a, b))
            else:
                m = 0.5 * (a + b)
                stack.append((a, m, depth + 1))
                stack.append((m, b, depth + 1))
        return out

    def integral(self, z: complex) -> complex:
        """sum_p int_p rho_p(s) / (s - z) ds."""
        z = complex(z)
        total = 0j
        for idx in range(len(self.pieces)):
            for a, b in self._panels(idx, z):
                s, wr = self._panel(idx, a, b)
                d = s - z
                if np.any(d == 0):
                    raise SingularityError("evaluation point lies on the contour", z=str(z))
                total += np.sum(wr / d)
        return complex(total)

    def W(self, z) -> complex:
        return complex(self.radical.w(complex(z))) if self.radical is not None else 1.0 + 0j

    def value(self, z: complex) -> complex:
        return self.W(z) * self.integral(z) / TWO_PI_I

    def moments(self, kmax: int, refine: int = 4) -> np.ndarray:
        """M_k = sum_p int_p s^k rho_p(s) ds for k = 0..kmax."""
        out = np.zeros(kmax + 1, dtype=complex)
        for idx in range(len(self.pieces)):
            edges = np.linspace(0.0, 1.0, 4 * refine + 1)
            for a, b in zip(edges, edges[1:]):
                s, wr = self._panel(idx, float(a), float(b))
                out += np.array([np.sum(wr * s**k) for k in range(kmax + 1)])
        return out

    def boundary(self, z0: complex, direction: complex, func: Callable | None = None) -> complex:
        """Limit of func(z0 + eps * direction) as eps -> 0+, by Richardson extrapolation."""
        f = self.value if func is None else func
        h = OFFSET * self.scale
        d = complex(direction) / abs(direction)
        return 2.0 * f(z0 + 0.5 * h * d) - f(z0 + h * d)


# --------------------------------------------------------------------------
# delta


def gamma_tilde(variant: str, genus: int) -> list:
    """Cut indices carrying the constant jump i of delta: k > [n/2] (odd) or k >= n/2 (even)."""
    if variant == "odd":
        return [k for k in range(genus + 1) if k > genus // 2]
    if variant == "even":
        return [k for k in range(genus + 1) if k >= genus // 2]
    raise SchemaError("variant must be 'odd' or 'even'", variant=variant)


def sub_radical(branch: BranchSet, cuts: list, quad_order: int = 32) -> Surface:
    return Surface(BranchSet(tuple(branch.E[list(cuts)])), quad_order=max(16, quad_order))


def _interval_pieces(a: float, b: float, numer: Callable, tail: float, breaks) -> list:
    lo = a if math.isfinite(a) else None
    hi = b if math.isfinite(b) else None
    left = lo if lo is not None else (hi - tail if hi is not None else -tail)
    right = hi if hi is not None else (lo + tail if lo is not None else tail)
    if lo is None and hi is None:
        left, right = -tail, tail
    cuts = sorted(x for x in breaks if left < x < right)
    nodes = [left, *cuts, right]
    pieces = []
    if lo is None:
        pieces.append(Piece("ray", numer, a=complex(left), b=-1.0 + 0j, length=tail, outward=False, tag="ray-"))
    pieces += [Piece("segment", numer, a=complex(x0), b=complex(x1), tag="interval")
               for x0, x1 in zip(nodes, nodes[1:])]
    if hi is None:
        pieces.append(Piece("ray", numer, a=complex(right), b=1.0 + 0j, length=tail, outward=True, tag="ray+"))
    return pieces


@dataclass
class DeltaModel:
    """delta(z) = nu(z)^sign * exp(W(z)/(2 pi i) int_I log(1+|r|^2) / (W(s)(s - z)) ds).

    ``nu`` is prod over the constant-jump cuts of ((z - conj E)/(z - E))^(1/4)
    (principal root per factor); ``sign`` is -1 for the odd variant, +1 for the
    even one. W is the radical over ``radical_cuts``.
    """

    variant: str
    branch: BranchSet
    scattering: ScatteringData
    intervals: list
    nu_cuts: list
    radical_cuts: list
    cauchy: CauchySum
    moments: np.ndarray
    delta_inf: complex
    I1: complex
    moment_residual: float
    warnings: list = field(default_factory=list)

    @property
    def nu_sign(self) -> int:
        return -1 if self.variant == "odd" else 1

    @property
    def radical(self) -> Surface:
        return self.cauchy.radical

    def log_nu(self, z) -> complex:
        z = complex(z)
        out = 0j
        for k in self.nu_cuts:
            e = self.branch.E[k]
            out += 0.25 * cmath.log((z - e.conjugate()) / (z - e))
        return out

    def exponent(self, z) -> complex:
        return self.cauchy.value(z)

    def log_delta(self, z) -> complex:
        return self.nu_sign * self.log_nu(z) + self.exponent(z)

    def __call__(self, z) -> complex:
        return cmath.exp(self.log_delta(z))

    def boundary_exponent(self, x: float, side: int) -> complex:
        """Exponent boundary value on the real line; side +1 is the upper side."""
        return self.cauchy.boundary(complex(x), 1j * side)

    def jump_ratio(self, x: float) -> complex:
        return cmath.exp(self.boundary_exponent(x, 1) - self.boundary_exponent(x, -1))

    def log_product_on_cut(self, k: int, s: complex) -> complex:
        """log(delta_+ delta_-) at an interior point s of cut k (off the real line)."""
        s = complex(s)
        lognu = 0j
        for j in self.nu_cuts:
            e = self.branch.E[j]
            ratio = (s - e.conjugate()) / (s - e)
            lognu += 0.5 * (math.log(abs(ratio)) if j == k else cmath.log(ratio))
        own = [j for j in self.radical_cuts if j == k]
        expo = 0j if own else 2.0 * self.exponent(s)
        return self.nu_sign * lognu + expo

    def exponent_expansion_check(self, radii=(1e3, 2e3)) -> dict:
        """Compare exp(E(z)) at z = i R with delta_inf (1 + I1/R)."""
        out = []
        E0 = cmath.log(self.delta_inf)
        for R in radii:
            z = 1j * R * self.cauchy.scale
            val = self.exponent(z)
            out.append(((val - E0) * z, abs(val - E0)))
        return {"radii": list(radii), "scaled_remainders": [complex(v[0]) for v in out],
                "remainders": [float(v[1]) for v in out], "I1": complex(self.I1)}

    # ----------------------------------------------------- local structure

    def _touching(self, kappa: float):
        hits = []
        for p in self.cauchy.pieces:
            if p.kind != "segment":
                continue
            if abs(p.a - kappa) < 1e-14 * (1 + abs(kappa)):
                hits.append((p, 1, p.b))
            elif abs(p.b - kappa) < 1e-14 * (1 + abs(kappa)):
                hits.append((p, -1, p.a))
        return hits

    def _check_regular(self, kappa: float):
        if any(a < kappa < b for a, b in self.intervals):
            raise SchemaError("kappa lies inside the delta contour", kappa=kappa)

    def singular_part(self, kappa: float, z) -> complex:
        """Logarithmic part of log delta at kappa (zero when kappa is off the contour)."""
        hits = self._touching(kappa)
        if not hits:
            self._check_regular(kappa)
            return 0j
        L = float(self.scattering.log_weight(kappa).real)
        z = complex(z)
        out = 0j
        for p, eps, far in hits:
            theta = cmath.phase(far - kappa)
            out += -eps * (L / TWO_PI_I) * complex(log_cut(kappa - z, theta + math.pi))
        return out

    def chi(self, kappa: float, z=None) -> complex:
        """Regular part log delta - singular part; at z = kappa via the subtracted integral."""
        if z is not None and abs(complex(z) - kappa) > 0:
            return self.log_delta(z) - self.singular_part(kappa, z)
        hits = self._touching(kappa)
        if not hits:
            self._check_regular(kappa)
            return self.log_delta(kappa)
        cs = self.cauchy
        rho_k = None
        total = 0j
        touching_ids = {id(p) for p, _, _ in hits}
        for idx, p in enumerate(cs.pieces):
            if id(p) in touching_ids:
                continue
            for a, b in cs._panels(idx, complex(kappa)):
                s, wr = cs._panel(idx, a, b)
                total += np.sum(wr / (s - kappa))
        for p, eps, far in hits:
            idx = cs.pieces.index(p)
            rk = complex(cs._density(p, np.array([complex(kappa)]), None)[0])
            rho_k = rk
            x, wt = gauss_legendre(64)
            s, ds, phi = cs._geom(p, x)
            dens = cs._density(p, s, phi)
            total += np.sum(wt * ds * (dens - rk) / (s - kappa))
            theta = cmath.phase(far - kappa)
            total += eps * rk * complex(log_cut(far - kappa, theta + math.pi))
        Wk = cs.W(kappa)
        return self.nu_sign * self.log_nu(kappa) + Wk * total / TWO_PI_I


def delta_contour(variant: str, branch: BranchSet, kappas) -> list:
    """Real intervals of the delta contour from the relevant stationary points.

    odd:  kappas = (k1, k2, k3 or None) ->
          (-inf, k1) u (k2, B_a) u (k3, B_{a+1}),  B_a the first cut centre right of k2;
          k1 == k2 merges the first two intervals.
    even: kappas = (k1, k2) -> (-inf, k1) u (B_{n/2+1}, k2).
    """
    B = branch.B
    n = branch.genus
    if variant == "odd":
        k1, k2 = float(kappas[0]), float(kappas[1])
        k3 = kappas[2] if len(kappas) > 2 else None
        if k2 < k1:
            raise SchemaError("need k1 <= k2", kappas=list(kappas))
        right = [i for i in range(n + 1) if B[i] > k2]
        if not right:
            return [(-math.inf, k1)] + ([(k2, math.inf)] if k2 > k1 else [])
        a = right[0]
        out = [(-math.inf, float(B[a]))] if k2 == k1 else [(-math.inf, k1), (k2, float(B[a]))]
        if k3 is not None and a + 1 <= n and B[a] < k3 < B[a + 1]:
            out.append((float(k3), float(B[a + 1])))
        return out
    if variant == "even":
        k1, k2 = float(kappas[0]), float(kappas[1])
        out = [(-math.inf, k1)]
        j = n // 2 + 1
        if j <= n and k2 > B[j]:
            out.append((float(B[j]), k2))
        return out
    raise SchemaError("variant must be 'odd' or 'even'", variant=variant)


def build_delta(variant: str, branch: BranchSet, scattering: ScatteringData, intervals: list,
                radical: str = "base", nu_cuts: list | None = None) -> DeltaModel:
    """Assemble delta on the given real intervals.

    ``radical`` selects W: "base" (the first constant-jump cut only; no moment
    conditions), "subset" (all constant-jump cuts) or "full" (every cut).
    """
    n = branch.genus
    gt = gamma_tilde(variant, n) if nu_cuts is None else list(nu_cuts)
    if radical == "base":
        rcuts = gt[:1] if gt else [0]
    elif radical == "subset":
        rcuts = gt if gt else [0]
    elif radical == "full":
        rcuts = list(range(n + 1))
    else:
        raise SchemaError("radical must be base, subset or full", radical=radical)
    W = sub_radical(branch, rcuts)
    scale = float(max(np.ptp(branch.B), branch.A.max(), 1.0))
    tail = 4.0 * (scale + float(np.abs(branch.B).max()))
    numer = lambda s: scattering.log_weight(s.real + 0j) if np.all(s.imag == 0) else scattering.log_weight(s)
    pieces = []
    for a, b in intervals:
        if not a < b:
            raise SchemaError("empty delta interval", interval=[a, b])
        pieces += _interval_pieces(a, b, numer, tail, [branch.B[k] for k in rcuts])
    for k in range(n + 1):
        lam = scattering.cut_jump_log(k)
        if lam is None or k in gt:
            continue
        e = branch.E[k]
        B = complex(e.real)
        pieces.append(Piece("segment", lam, a=B + 0j, b=e, tag=f"cutlog{k}"))
        pieces.append(Piece("segment", lambda s, f=lam: np.conj(f(np.conj(s))), a=e.conjugate(), b=B + 0j,
                            tag=f"cutlog{k}-"))
    cs = CauchySum(pieces, W, scale)
    m = len(rcuts) - 1
    M = cs.moments(m + 1) if pieces else np.zeros(m + 2, complex)
    w1 = -float(np.sum(branch.B[rcuts]))
    E0 = -M[m] / TWO_PI_I
    E1 = -(M[m + 1] + w1 * M[m]) / TWO_PI_I
    resid = float(np.max(np.abs(M[:m]), initial=0.0))
    warns = []
    if resid > 1e-6:
        warns.append(f"moment conditions violated: max |M_k| = {resid:.3e} for k < {m}")
    return DeltaModel(variant, branch, scattering, list(intervals), list(gt), list(rcuts), cs, M,
                      complex(cmath.exp(E0)), complex(E1), resid, warns)


# --------------------------------------------------------------------------
# g-function


@dataclass(frozen=True)
class GSpec:
    """Prescribed upper-half data for the g-function.

    kind "cut": radical cut ``cut`` from B up to E, jump g_+ + g_- = 2 alpha + data.
    kind "arc": straight arc a -> b (W continuous there), jump g_+ - g_- = 2 alpha + data.
    The lower half is the mirror image with conjugated data.
    """

    kind: str
    data: Callable
    alpha: int | None = None
    cut: int = -1
    a: complex = 0j
    b: complex = 0j
    label: str = ""


def _mirror(f: Callable) -> Callable:
    return lambda s: np.conj(f(np.conj(s)))


def _spec_pieces(spec: GSpec, numer: Callable) -> list:
    if spec.kind == "cut":
        return [Piece("cut", numer, denom="plus", cut=spec.cut, phi0=0.0, phi1=HALF_PI, tag=spec.label),
                Piece("cut", _mirror(numer), denom="plus", cut=spec.cut, phi0=-HALF_PI, phi1=0.0,
                      tag=spec.label + "-")]
    if spec.kind == "arc":
        return [Piece("segment", numer, a=spec.a, b=spec.b, tag=spec.label),
                Piece("segment", _mirror(numer), a=np.conj(spec.b), b=np.conj(spec.a), tag=spec.label + "-")]
    raise SchemaError("GSpec.kind must be cut or arc", kind=spec.kind)


@dataclass
class GFunction:
    variant: str
    specs: list
    alphas: np.ndarray
    cauchy: CauchySum
    moments: np.ndarray
    g_inf: complex
    g1: complex
    I2: complex
    report: dict

    def __call__(self, z) -> complex:
        return self.cauchy.value(complex(z))

    def spec_value(self, spec: GSpec, s) -> complex:
        """Prescribed jump right-hand side 2 alpha + data at s (either half)."""
        s = complex(s)
        alpha = 0.0 if spec.alpha is None else float(self.alphas[spec.alpha])
        upper = s.imag > 0 or (spec.kind == "arc" and s.imag >= 0)
        val = spec.data(np.array([s]))[0] if upper else np.conj(spec.data(np.array([s.conjugate()]))[0])
        return 2 * alpha + complex(val)

    def jump_residuals(self, fractions=(0.5,)) -> list:
        out = []
        for spec in self.specs:
            for frac in fractions:
                for lower in (False, True):
                    if spec.kind == "cut":
                        W = self.cauchy.radical
                        phi = (-1 if lower else 1) * frac * HALF_PI
                        s = W.B[spec.cut] + 1j * W.A[spec.cut] * math.sin(phi)
                        plus = self.cauchy.boundary(s, -1.0)
                        minus = self.cauchy.boundary(s, 1.0)
                        got = plus + minus
                    else:
                        a, b = (spec.a, spec.b) if not lower else (np.conj(spec.b), np.conj(spec.a))
                        s = a + frac * (b - a)
                        nrm = 1j * (b - a)
                        got = self.cauchy.boundary(s, nrm) - self.cauchy.boundary(s, -nrm)
                    want = self.spec_value(spec, s)
                    out.append({"piece": spec.label + ("-" if lower else ""), "kind": spec.kind,
                                "z": [s.real, s.imag], "residual": float(abs(got - want))})
        return out

    def to_json(self) -> dict:
        return {"variant": self.variant, "alphas": self.alphas.tolist(),
                "g_inf": [self.g_inf.real, self.g_inf.imag], "I2": [self.I2.real, self.I2.imag],
                "g1": [self.g1.real, self.g1.imag],
                **self.report}


def solve_g(variant: str, radical: Surface, specs: list, n_alpha: int, scale: float = 1.0,
            rank_tol: float = 1e-10) -> GFunction:
    """Solve the real alpha's from the vanishing low moments and assemble g."""
    m = radical.genus  # number of moment conditions
    base_pieces = [p for sp in specs for p in _spec_pieces(sp, sp.data)]
    base = CauchySum(base_pieces, radical, scale)
    M0 = base.moments(m + 1) if base_pieces else np.zeros(m + 2, complex)
    D = np.zeros((m + 2, n_alpha), dtype=complex)
    for j in range(n_alpha):
        two = lambda s: np.full(np.shape(s), 2.0 + 0j)
        pj = [p for sp in specs if sp.alpha == j for p in _spec_pieces(sp, two)]
        if pj:
            D[:, j] = CauchySum(pj, radical, scale).moments(m + 1)
    rows = np.vstack([D[:m].real, D[:m].imag]) if m else np.zeros((0, n_alpha))
    rhs = -np.concatenate([M0[:m].real, M0[:m].imag]) if m else np.zeros(0)
    if n_alpha and m:
        alphas, _, rank, sv = np.linalg.lstsq(rows, rhs, rcond=rank_tol)
        rank = int(rank)
    else:
        alphas, rank = np.zeros(n_alpha), 0
    Mt = M0 + D @ alphas
    resid = float(np.max(np.abs(Mt[:m]), initial=0.0))
    sym = float(np.max(np.abs(Mt.real), initial=0.0))
    report = {"unknowns": n_alpha, "conditions": m, "rank": rank, "moment_residual": resid,
              "symmetry_residual": sym, "consistent": resid < 1e-6,
              "determined": rank == n_alpha and n_alpha == m}
    if resid > 1e-6 and n_alpha >= m and rank == m:
        raise InconsistentSystemError("alpha system failed to zero the moments", **report)
    final_pieces = []
    for sp in specs:
        a = 0.0 if sp.alpha is None else float(alphas[sp.alpha])
        numer = (lambda s, f=sp.data, a=a: 2 * a + f(s))
        final_pieces += _spec_pieces(sp, numer)
    cs = CauchySum(final_pieces, radical, scale)
    w1 = -float(np.sum(radical.B))
    g_inf = -Mt[m] / TWO_PI_I
    g1 = -(Mt[m + 1] + w1 * Mt[m]) / TWO_PI_I
    I2 = g1 / g_inf if abs(g_inf) > 1e-12 * (1 + abs(g1)) else complex(math.nan, math.nan)
    return GFunction(variant, list(specs), np.asarray(alphas, float), cs, Mt, complex(g_inf), complex(g1),
                     complex(I2), report)


def g_odd(delta: DeltaModel) -> GFunction:
    """g on the constant-jump cuts with data i log(delta_+ delta_-), alpha on every cut but the first."""
    branch = delta.branch
    gt = gamma_tilde("odd", branch.genus)
    W = sub_radical(branch, gt)
    specs = []
    for local, k in enumerate(gt):
        data = (lambda s, k=k: np.array([1j * delta.log_product_on_cut(k, v) for v in np.atleast_1d(s)]))
        specs.append(GSpec("cut", data, None if local == 0 else local - 1, cut=local, label=f"cut{k}"))
    return solve_g("odd", W, specs, max(len(gt) - 1, 0), delta.cauchy.scale)


def g_even(delta: DeltaModel, surface: Surface, scattering: ScatteringData, E00: complex, E01: complex,
           kappa1: float) -> GFunction:
    """Even-genus g over the extended radical ``surface``; alphas ordered (a1, a2, a3, a4).

    ``delta`` lives on the base branch set; extended cuts are matched to base
    cuts by their branch point. The two added cuts carry no data.

    a1: arc E01 -> E00, data -i log(i r* delta^2 / (1 + r r*)); dropped when r = 0
    a2: constant-jump base cuts, data i log(delta_+ delta_-)
    a3: remaining base cuts other than cut 0, data i log delta^2
    a4: arc kappa1 -> E01, data i log(1 + r r*)
    """
    base = delta.branch
    gt = set(gamma_tilde("even", base.genus))
    two_log = lambda s: np.array([2j * delta.log_delta(v) for v in np.atleast_1d(s)])
    specs = []
    for k, e in enumerate(surface.E):
        dist = np.abs(base.E - e)
        kb = int(np.argmin(dist))
        if dist[kb] > 1e-12 * (1 + abs(e)):
            continue
        if kb in gt:
            data = (lambda s, kb=kb: np.array([1j * delta.log_product_on_cut(kb, v) for v in np.atleast_1d(s)]))
            specs.append(GSpec("cut", data, 1, cut=k, label=f"cut{kb}"))
        else:
            specs.append(GSpec("cut", two_log, None if kb == 0 else 2, cut=k, label=f"cut{kb}"))
    if not scattering.is_zero:
        def g1(s):
            s = np.atleast_1d(s)
            logd = np.array([delta.log_delta(v) for v in s])
            return -1j * (0.5j * math.pi + scattering.log_r_star(s) + 2 * logd - scattering.log_weight(s))
        specs.append(GSpec("arc", g1, 0, a=complex(E01), b=complex(E00), label="arc01-00"))
    specs.append(GSpec("arc", lambda s: 1j * scattering.log_weight(np.atleast_1d(s)), 3,
                       a=complex(kappa1), b=complex(E01), label="arc-k1-01"))
    return solve_g("even", surface, specs, 4, delta.cauchy.scale)


# --------------------------------------------------------------------------
# parabolic-cylinder local data


@dataclass
class PCLocalData:
    kappa: float
    nu: float
    theta2: float
    psi0: float
    chi0: complex
    chi_tilde0: complex
    r_kappa: complex
    tilde_endpoint: complex

    @property
    def rho(self) -> float:
        return self.nu

    def log_delta_hat1(self, t: float) -> complex:
        return -1j * self.nu * (math.log(2 * math.sqrt(t)) + math.log(self.psi0)) + self.chi0 + self.chi_tilde0

    def r_eff(self, t: float) -> complex:
        """r(kappa) times the phase of delta_hat_1(t)^-2 (modulus untouched)."""
        return self.r_kappa * cmath.exp(-2j * self.log_delta_hat1(t).imag)


class DeltaTilde:
    """delta~(z) = exp{(1/2 pi i) sum_Q int_{kappa -> Q} log(1 + r r*)(s) / (s - z) ds}, Q in {P, conj P}.

    Both segments leave kappa, so delta~_+ / delta~_- = 1 + |r|^2 with respect to
    that orientation, and delta~(z) conj(delta~(conj z)) = 1.
    """

    def __init__(self, scattering: ScatteringData, kappa: float, endpoint: complex, scale: float = 1.0):
        self.scattering, self.kappa, self.P = scattering, float(kappa), complex(endpoint)
        if self.P.imag <= 0:
            raise SchemaError("delta~ endpoint must lie in the upper half plane")
        f = scattering.log_weight
        self.cauchy = CauchySum([Piece("segment", f, a=complex(kappa), b=self.P, denom="none", tag="up"),
                                 Piece("segment", f, a=complex(kappa), b=self.P.conjugate(), denom="none",
                                       tag="down")], None, scale)

    def log(self, z) -> complex:
        return self.cauchy.value(z)

    def __call__(self, z) -> complex:
        return cmath.exp(self.log(z))

    def singular_part(self, z) -> complex:
        L = float(self.scattering.log_weight(self.kappa).real)
        out = 0j
        for Q in (self.P, self.P.conjugate()):
            theta = cmath.phase(Q - self.kappa)
            out += -(L / TWO_PI_I) * complex(log_cut(self.kappa - complex(z), theta + math.pi))
        return out

    def chi(self, z=None) -> complex:
        if z is not None and complex(z) != self.kappa:
            return self.log(z) - self.singular_part(z)
        k = self.kappa
        L0 = complex(self.scattering.log_weight(k))
        x, wt = gauss_legendre(64)
        total = 0j
        for Q in (self.P, self.P.conjugate()):
            s = k + (Q - k) * x
            total += np.sum(wt * (Q - k) * (self.scattering.log_weight(s) - L0) / (s - k))
            theta = cmath.phase(Q - k)
            total += L0 * complex(log_cut(Q - k, theta + math.pi))
        return total / TWO_PI_I


def pc_local_data(delta: DeltaModel, scattering: ScatteringData, kappa: float, theta2: float,
                  endpoint: complex) -> tuple[PCLocalData, DeltaTilde]:
    """Local constants at a simple real stationary point kappa with theta''(kappa) = theta2."""
    if abs(theta2) < 1e-8:
        raise SingularityError("theta'' vanishes at kappa; use the Painleve regime", kappa=kappa)
    nu = float(math.log1p(abs(complex(scattering.r(kappa))) ** 2) / (2 * math.pi))
    dt = DeltaTilde(scattering, kappa, endpoint, delta.cauchy.scale)
    chi0 = delta.chi(kappa)
    chit0 = dt.chi()
    psi0 = math.sqrt(abs(theta2) / 2)
    data = PCLocalData(float(kappa), nu, float(theta2), psi0, complex(chi0), complex(chit0),
                       complex(scattering.r(kappa)), complex(endpoint))
    return data, dt


def delta_hat_parts(data: PCLocalData, delta: DeltaModel, dtilde: DeltaTilde, psi: Callable,
                    z: complex, t: float) -> dict:
    """Split log(delta~ delta) at z near kappa into zeta-, t- and z-dependent parts.

    ``psi(z)`` is the analytic function with zeta = 2 sqrt(t) (z - kappa) psi(z).
    """
    k, nu = data.kappa, data.nu
    z = complex(z)
    pz = complex(psi(z))
    zeta = 2 * math.sqrt(t) * (z - k) * pz
    sing = delta.singular_part(k, z) + dtilde.singular_part(z)
    # singular logs re-expressed through zeta: log(kappa - z) = log(-zeta) - log(2 sqrt t) - log psi(z)
    shift = math.log(2 * math.sqrt(t)) + cmath.log(pz)
    coeff = sing_coefficients(delta, dtilde, k)
    log0 = 0j
    for c, theta in coeff:
        log0 += c * complex(log_cut(-zeta, theta))
    log1 = -sum(c for c, _ in coeff) * (math.log(2 * math.sqrt(t)) + math.log(data.psi0)) + data.chi0 + data.chi_tilde0
    log2 = (-sum(c for c, _ in coeff) * cmath.log(pz / data.psi0)
            + delta.chi(k, z) - data.chi0 + dtilde.chi(z) - data.chi_tilde0)
    total = delta.log_delta(z) + dtilde.log(z)
    return {"zeta": zeta, "log_hat0": log0, "log_hat1": log1, "log_hat2": log2,
            "log_total": total, "sing": sing, "shift": shift}


def sing_coefficients(delta: DeltaModel, dtilde: DeltaTilde, kappa: float) -> list:
    """(coefficient, cut angle) pairs with sing(z) = sum c * log_cut(kappa - z, angle)."""
    L = float(delta.scattering.log_weight(kappa).real)
    out = []
    for p, eps, far in delta._touching(kappa):
        out.append((-eps * L / TWO_PI_I, cmath.phase(far - kappa) + math.pi))
    for Q in (dtilde.P, dtilde.P.conjugate()):
        out.append((-L / TWO_PI_I, cmath.phase(Q - kappa) + math.pi))
    return out
