"""Riemann theta function by truncated lattice summation.

    Theta(z) = sum_N exp(pi i <N, tau N> + 2 pi i <N, z>)

The lattice is truncated to the box |N_j| <= R, where R is the smallest
radius whose Gaussian tail bound falls under half the tolerance. Lattice
points are summed in +N / -N pairs, so evenness holds exactly in floating
point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ThetaError


def _radius(lam_min: float, n: int, tol: float) -> int:
    R = 1
    while math.exp(-math.pi * lam_min * R * R) * (2 * R + 1) ** n >= 0.5 * tol:
        R += 1
        if R > 200:
            raise ThetaError("truncation radius diverges", lambda_min=lam_min)
    return R


@dataclass
class ThetaContext:
    tau: np.ndarray
    tol: float = 1e-14
    radius: int | None = None
    _half: np.ndarray = field(init=False, repr=False)
    _quad: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        tau = np.atleast_2d(np.asarray(self.tau, dtype=complex))
        n = tau.shape[0] if tau.size else 0
        self.tau = tau.reshape(n, n)
        if n == 0:
            self.radius = 0
            self._half = np.zeros((0, 0))
            self._quad = np.zeros(0, complex)
            return
        eig = np.linalg.eigvalsh(0.5 * (self.tau.imag + self.tau.imag.T))
        if eig.min() <= 0:
            raise ThetaError("Im tau is not positive definite", eigenvalues=eig.tolist())
        if self.radius is None:
            self.radius = _radius(float(eig.min()), n, self.tol)
        R = self.radius
        pts = np.array(list(itertools.product(range(-R, R + 1), repeat=n)), dtype=float)
        # keep one representative of each +/- pair; the origin is handled separately
        nz = pts != 0
        lead = np.argmax(nz, axis=1)
        first = np.where(nz.any(axis=1), pts[np.arange(len(pts)), lead], 0)
        half = pts[first > 0]
        self._half = half
        self._quad = np.exp(1j * math.pi * np.einsum("ki,ij,kj->k", half, self.tau, half))

    @property
    def genus(self) -> int:
        return self.tau.shape[0]

    def __call__(self, z) -> complex | np.ndarray:
        return theta(self, z)


def theta(ctx: ThetaContext, z) -> complex | np.ndarray:
    """Theta at z (shape (n,) or (..., n))."""
    z = np.asarray(z, dtype=complex)
    if ctx.genus == 0:
        return 1.0 + 0j if z.ndim <= 1 else np.ones(z.shape[:-1], complex)
    lin = 2j * math.pi * (z @ ctx._half.T)
    terms = ctx._quad * (np.exp(lin) + np.exp(-lin))
    return 1.0 + terms.sum(axis=-1)


def theta_quasi_shift(ctx: ThetaContext, z, m, mprime) -> complex:
    """Factor F with Theta(z + m + tau m') = F * Theta(z)."""
    z = np.asarray(z, dtype=complex)
    mp = np.asarray(mprime, dtype=float)
    if ctx.genus == 0:
        return 1.0 + 0j
    return complex(np.exp(2j * math.pi * (-(mp @ z) - 0.5 * (mp @ ctx.tau @ mp))))


def log_theta(ctx: ThetaContext, z) -> complex:
    """log Theta(z), with z first shifted by tau m' so the lattice sum stays bounded.

    Uses Theta(z' + tau m') = exp(-2 pi i (<m', z'> + <m', tau m'>/2)) Theta(z');
    the imaginary part of the result is defined only modulo 2 pi.
    """
    z = np.asarray(z, dtype=complex)
    if ctx.genus == 0:
        return 0j
    mp = np.round(np.linalg.solve(ctx.tau.imag, z.imag))
    zr = z - ctx.tau @ mp
    val = theta(ctx, zr)
    if val == 0:
        raise ThetaError("theta vanishes at the requested point")
    return complex(np.log(val) - 2j * math.pi * (mp @ zr + 0.5 * mp @ ctx.tau @ mp))


def theta_quotient(ctx: ThetaContext, numer, denom) -> complex:
    """prod Theta(numer_i) / prod Theta(denom_i) without overflow."""
    acc = sum(log_theta(ctx, a) for a in numer) - sum(log_theta(ctx, b) for b in denom)
    return complex(np.exp(acc))
