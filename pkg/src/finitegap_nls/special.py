"""Special functions for the local parametrices.

Airy values come from scipy (AMOS), Gamma from scipy's complex loggamma. The
Hastings-McLeod transcendent u'' = p u + 2 u^3, u ~ a Ai(p) as p -> +inf, is
obtained by integrating down from p = 12 with an Airy seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sps
from scipy.integrate import solve_ivp

from .errors import DomainError, SchemaError, SingularityError

AIRY_GUARD = 100.0
HM_START = 12.0
HM_FLOOR = -8.0
OMEGA = cmath.exp(2j * math.pi / 3)


def airy(z, derivative: bool = False, scaled: bool = False):
    """Ai(z) (or Ai'(z)); ``scaled`` multiplies by exp(2/3 z^(3/2))."""
    z = np.asarray(z, dtype=complex)
    if not scaled and np.any(np.abs(z) > AIRY_GUARD):
        raise DomainError("Airy argument beyond the overflow guard; use scaled=True", guard=AIRY_GUARD)
    fn = sps.airye if scaled else sps.airy
    ai, aip, _, _ = fn(z)
    out = aip if derivative else ai
    if np.all(z.imag == 0):
        out = out.real
    return out[()] if out.ndim == 0 else out


def complex_gamma(z) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise SingularityError("Gamma has a pole at non-positive integers", z=z.real)
    return complex(np.exp(sps.loggamma(z)))


# --------------------------------------------------------------------------
# Hastings-McLeod


def _hm_rhs(p, y):
    u, up, _ = y
    return [up, p * u + 2 * u**3, -u * u]


def _airy_seed(a: float, p0: float):
    ai, aip, _, _ = sps.airy(p0)
    tail = aip * aip - p0 * ai * ai  # integral of Ai^2 from p0 to infinity
    return [a * ai, a * aip, a * a * tail]


@dataclass
class HMState:
    """Cached Hastings-McLeod solution on [floor, 12] for one amplitude a."""

    a: float
    floor: float = HM_FLOOR
    rtol: float = 1e-12
    sol: object = field(init=False, repr=False)
    last_valid: float = field(init=False)

    def __post_init__(self):
        self.a = float(self.a)
        if not math.isfinite(self.a):
            raise SchemaError("HM amplitude must be finite")
        self.last_valid = self.floor
        if self.a == 0:
            self.sol = None
            return
        amp = abs(self.a)

        def blowup(p, y):
            return 1e6 - abs(y[0])
        blowup.terminal = True
        res = solve_ivp(_hm_rhs, (HM_START, self.floor), _airy_seed(amp, HM_START), method="DOP853",
                        rtol=self.rtol, atol=1e-300, dense_output=True, events=blowup)
        if res.status == 1:
            self.last_valid = float(res.t_events[0][0])
        elif res.status != 0:
            raise DomainError("HM integration failed", message=res.message)
        self.sol = res.sol

    def __call__(self, p: float) -> tuple[float, float, float]:
        """(u, u', integral of u^2 from p to infinity)."""
        p = float(p)
        if self.sol is None:
            return 0.0, 0.0, 0.0
        if p > HM_START:
            u, up, tail = _airy_seed(abs(self.a), p)
        else:
            if p < self.last_valid or p < self.floor:
                raise DomainError("p lies beyond the last valid point of the HM solution",
                                  p=p, last_valid=self.last_valid)
            u, up, tail = self.sol(p)
        sign = 1.0 if self.a > 0 else -1.0
        return sign * float(u), sign * float(up), float(tail)

    def ode_residual(self, grid) -> float:
        """max |u'' - p u - 2u^3| / (1 + |u|) by three-point differences on a uniform grid."""
        grid = np.asarray(grid, float)
        h = grid[1] - grid[0]
        u = np.array([self(p)[0] for p in grid])
        upp = (u[2:] - 2 * u[1:-1] + u[:-2]) / (h * h)
        mid = grid[1:-1]
        return float(np.max(np.abs(upp - mid * u[1:-1] - 2 * u[1:-1] ** 3) / (1 + np.abs(u[1:-1]))))

    def coefficient_matrix(self, p: float) -> np.ndarray:
        """Residue matrix of the Painleve model at infinity: off-diagonal u/2, diagonal -+(i/2) int u^2."""
        u, _, tail = self(p)
        return np.array([[-0.5j * tail, 0.5 * u], [0.5 * u, 0.5j * tail]])


def hm_solution(a: float, varpi: float, state: HMState | None = None) -> tuple[float, float, float]:
    st = state if state is not None and state.a == a else HMState(a)
    return st(varpi)


def hm_solution_reflected(a: float, varpi: float, rtol: float = 1e-12) -> tuple[float, float, float]:
    """Independent check: implicit Radau stepper in s = 12 - p (forward sweep)."""
    if a == 0:
        return 0.0, 0.0, 0.0
    amp = abs(a)

    def rhs(s, y):
        du, dup, dI = _hm_rhs(HM_START - s, y)
        return [-du, -dup, -dI]
    res = solve_ivp(rhs, (0.0, HM_START - varpi), _airy_seed(amp, HM_START), method="Radau",
                    rtol=rtol, atol=1e-300)
    if res.status != 0:
        raise DomainError("reflected HM integration failed", message=res.message)
    u, up, tail = res.y[:, -1]
    sign = 1.0 if a > 0 else -1.0
    return sign * float(u), sign * float(up), float(tail)


def hm_envelope(p: float) -> float:
    """p^(-1/4) exp(-4/3 p^(3/2)): size of the correction to a Ai(p)."""
    return p ** -0.25 * math.exp(-4.0 / 3.0 * p**1.5)


# --------------------------------------------------------------------------
# Airy parametrix


def airy_coefficients(N: int) -> tuple[np.ndarray, np.ndarray]:
    """u_k = (2k+1)(2k+3)...(6k-1) / (216^k k!), v_k = (6k+1)/(1-6k) u_k, k = 0..N."""
    u = np.ones(N + 1)
    for k in range(1, N + 1):
        num = math.prod(range(2 * k + 1, 6 * k, 2))
        u[k] = num / (216.0**k * math.factorial(k))
    v = u.copy()
    for k in range(1, N + 1):
        v[k] = (6 * k + 1) / (1 - 6 * k) * u[k]
    return u, v


def _sector(zeta: complex) -> int:
    arg = cmath.phase(zeta) % (2 * math.pi)
    if arg < 2 * math.pi / 3:
        return 1
    if arg < math.pi:
        return 2
    if arg < 4 * math.pi / 3:
        return 3
    return 4


def _power(zeta: complex, p: float, sector: int) -> complex:
    """zeta^p with the principal branch; on the negative axis the side follows the sector."""
    arg = cmath.phase(zeta)
    if zeta.imag == 0 and zeta.real < 0:
        arg = math.pi if sector == 2 else -math.pi
    return abs(zeta) ** p * cmath.exp(1j * p * arg)


def airy_model(zeta: complex, sector: int | None = None) -> np.ndarray:
    """Exact Airy parametrix: Airy matrix of the sector times exp(2/3 zeta^(3/2) sigma3).

    ``sector`` (1..4) selects the one-sided value on a ray.
    """
    zeta = complex(zeta)
    if zeta == 0:
        raise SingularityError("the Airy parametrix is only bounded at the origin")
    S = _sector(zeta) if sector is None else int(sector)
    rot = np.diag([cmath.exp(-1j * math.pi / 6), cmath.exp(1j * math.pi / 6)])
    if S in (1, 2):
        w = OMEGA**2 * zeta
        ai, aip, _, _ = sps.airy(zeta)
        bi, bip, _, _ = sps.airy(w)
        base = np.array([[ai, bi], [aip, OMEGA**2 * bip]], dtype=complex) @ rot
        if S == 2:
            base = base @ np.array([[1, 0], [-1, 1]])
    else:
        w = OMEGA * zeta
        ai, aip, _, _ = sps.airy(zeta)
        bi, bip, _, _ = sps.airy(w)
        base = np.array([[ai, -OMEGA**2 * bi], [aip, -bip]], dtype=complex) @ rot
        if S == 3:
            base = base @ np.array([[1, 0], [1, 1]])
    e = cmath.exp(2.0 / 3.0 * _power(zeta, 1.5, S))
    return base @ np.diag([e, 1 / e])


def airy_asymptotic(zeta: complex, N: int, sector: int | None = None) -> np.ndarray:
    zeta = complex(zeta)
    S = _sector(zeta) if sector is None else int(sector)
    u, v = airy_coefficients(N)
    x = 2.0 / 3.0 * _power(zeta, 1.5, S)
    q = _power(zeta, -0.25, S)
    out = np.zeros((2, 2), complex)
    for k in range(N + 1):
        sgn = (-1) ** k
        out += np.array([[sgn * u[k], u[k]], [-sgn * v[k], v[k]]]) / x**k
    pre = cmath.exp(1j * math.pi / 12) / (2 * math.sqrt(math.pi))
    return pre * np.diag([q, 1 / q]) @ out @ np.diag([cmath.exp(-1j * math.pi / 4), cmath.exp(1j * math.pi / 4)])


def airy_parametrix(zeta: complex, N: int, sector: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(exact model value, N-term asymptotic value) at zeta."""
    if N < 0:
        raise SchemaError("series order must be non-negative", N=N)
    return airy_model(zeta, sector), airy_asymptotic(zeta, N, sector)


def airy_jump(zeta: complex, ray: int) -> np.ndarray:
    """Jump matrix on ray Y_ray (rays oriented toward the origin)."""
    zeta = complex(zeta)
    if ray == 1:
        return np.array([[1, -cmath.exp(-4.0 / 3.0 * zeta**1.5)], [0, 1]])
    if ray in (2, 4):
        side = 1 if ray == 2 else 4
        return np.array([[1, 0], [cmath.exp(4.0 / 3.0 * _power(zeta, 1.5, side)), 1]])
    if ray == 3:
        return np.array([[0, 1], [-1, 0]], dtype=complex)
    raise SchemaError("ray must be 1..4", ray=ray)


# (+ side, - side) sectors for each ray; + is to the left of the inward orientation
AIRY_RAY_SIDES = {1: (4, 1), 2: (1, 2), 3: (2, 3), 4: (3, 4)}
AIRY_RAY_ANGLES = {1: 0.0, 2: 2 * math.pi / 3, 3: math.pi, 4: -2 * math.pi / 3}


def airy_jump_residual(ray: int, radius: float) -> float:
    """||N_+ - N_- J|| at the ray point of modulus ``radius``."""
    zeta = radius * cmath.exp(1j * AIRY_RAY_ANGLES[ray])
    if ray == 1:
        zeta = complex(radius, 0.0)
    elif ray == 3:
        zeta = complex(-radius, 0.0)
    plus, minus = AIRY_RAY_SIDES[ray]
    Np = airy_model(zeta, plus)
    Nm = airy_model(zeta, minus)
    return float(np.max(np.abs(Np - Nm @ airy_jump(zeta, ray))) / max(1.0, np.max(np.abs(Np))))


def airy_error(zeta: complex, N: int) -> float:
    exact, approx = airy_parametrix(zeta, N)
    return float(np.max(np.abs(np.linalg.solve(exact, approx) - np.eye(2))))


# --------------------------------------------------------------------------
# parabolic cylinder constants


def pc_beta(r_eff: complex, nu: float) -> tuple[complex, complex]:
    """(beta12, beta21) of the parabolic-cylinder model with effective reflection r_eff."""
    r_eff = complex(r_eff)
    if nu < 0:
        raise SchemaError("nu must be non-negative", nu=nu)
    if r_eff == 0 or nu == 0:
        return 0j, 0j
    if nu > 100:
        raise DomainError("nu too large for the Gamma factors", nu=nu)
    s = math.sqrt(2 * math.pi) * math.exp(-math.pi * nu / 2)
    b12 = s * cmath.exp(1j * math.pi / 4) / (r_eff * complex_gamma(-1j * nu))
    b21 = -s * cmath.exp(-1j * math.pi / 4) / (r_eff.conjugate() * complex_gamma(1j * nu))
    return b12, b21


def beta_modulus_squared(r_eff: complex, nu: float) -> float:
    """|beta12|^2 from |Gamma(i nu)|^2 = pi / (nu sinh(pi nu))."""
    return 2 * math.pi * math.exp(-math.pi * nu) * nu * math.sinh(math.pi * nu) / (math.pi * abs(r_eff) ** 2)
