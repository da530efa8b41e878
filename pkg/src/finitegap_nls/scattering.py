"""Synthetic solitonless scattering data.

The rational family is

    r(z) = amplitude * pole_scale * e^{i phase} / (z - i pole_scale),

whose Schwarz partner conj(r(conj z)) = amplitude * pole_scale * e^{-i phase} / (z + i pole_scale)
is its own analytic continuation off the axis. On the real line both agree
with the conjugate of r, and |r| decays like 1/|z|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContourProximityError, SchemaError


@dataclass(frozen=True)
class ScatteringData:
    family: str = "zero"
    amplitude: float = 0.0
    pole_scale: float = 1.0
    phase: float = 0.0
    cut_jump_logs: dict = field(default_factory=dict)
    solitonless: bool = True

    def __post_init__(self):
        if self.family not in ("zero", "rational"):
            raise SchemaError("unknown reflection family", family=self.family)
        if not self.solitonless:
            raise SchemaError("soliton data is not supported")
        if self.amplitude < 0 or not math.isfinite(self.amplitude):
            raise SchemaError("amplitude must be a finite non-negative number", amplitude=self.amplitude)
        if self.family == "rational" and not self.pole_scale > 0:
            raise SchemaError("pole_scale must be positive (a zero scale puts the pole on the real line)",
                              pole_scale=self.pole_scale)

    @property
    def is_zero(self) -> bool:
        return self.family == "zero" or self.amplitude == 0.0

    def r(self, z):
        """Reflection coefficient, continued analytically off the real line."""
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        c = self.amplitude * self.pole_scale * np.exp(1j * self.phase)
        return c / (z - 1j * self.pole_scale)

    def r_star(self, z):
        """Schwarz partner conj(r(conj z)), analytic in z."""
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        c = self.amplitude * self.pole_scale * np.exp(-1j * self.phase)
        return c / (z + 1j * self.pole_scale)

    def log_r_star(self, z):
        """log of r_star continuous in the upper half plane."""
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            raise SchemaError("log r is undefined for zero reflection")
        base = math.log(self.amplitude * self.pole_scale) - 1j * self.phase
        return base - np.log(z + 1j * self.pole_scale)

    def analytic_radius(self) -> float:
        """Half-width of the strip around the real line where log(1 + r r_star) is analytic."""
        return math.inf if self.is_zero else self.pole_scale

    def log_weight(self, z):
        """log(1 + r(z) r_star(z)); equals log(1 + |r|^2) on the real line."""
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        if np.any(np.abs(z.imag) >= 0.98 * self.pole_scale):
            raise ContourProximityError("contour leaves the analyticity strip of the reflection data",
                                        strip=self.pole_scale, max_imag=float(np.abs(z.imag).max()))
        return np.log1p(self.r(z) * self.r_star(z))

    def cut_jump_log(self, k: int) -> Callable | None:
        """Stand-in for the cut jump data on cut k (None when absent)."""
        val = self.cut_jump_logs.get(k)
        if val is None:
            return None
        if callable(val):
            return val
        return lambda z, v=complex(val): np.full(np.shape(z), v, dtype=complex)

    def schwarz_residual(self, x) -> float:
        """max |r_star(x) - conj r(x)| on real samples."""
        x = np.asarray(x, dtype=float)
        return float(np.max(np.abs(self.r_star(x) - np.conj(self.r(x))), initial=0.0))

    def to_json(self) -> dict:
        return {"family": self.family, "amplitude": self.amplitude,
                "pole_scale": self.pole_scale, "phase": self.phase}


def make_rational_r(amplitude: float, pole_scale: float, phase: float = 0.0) -> ScatteringData:
    if pole_scale <= 0:
        raise SchemaError("pole_scale must be positive", pole_scale=pole_scale)
    fam = "zero" if amplitude == 0 else "rational"
    return ScatteringData(fam, float(amplitude), float(pole_scale), float(phase))


def zero_reflection() -> ScatteringData:
    return ScatteringData("zero")


def log_one_plus_rsq(data: ScatteringData, z) -> np.ndarray | float:
    """log(1 + |r(z)|^2) for real z."""
    x = np.asarray(z, dtype=float)
    out = np.log1p(np.abs(data.r(x)) ** 2)
    return float(out) if out.ndim == 0 else out


def scattering_from_config(spec: dict | None) -> ScatteringData:
    if not spec:
        return zero_reflection()
    if not isinstance(spec, dict):
        raise SchemaError("reflection must be an object")
    fam = spec.get("family", "zero")
    if fam == "zero":
        return zero_reflection()
    if fam != "rational":
        raise SchemaError("reflection.family must be 'rational' or 'zero'", family=fam)
    try:
        amp = float(spec["amplitude"])
        scale = float(spec.get("pole_scale", 1.0))
        phase = float(spec.get("phase", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("reflection needs numeric amplitude/pole_scale", field=str(exc)) from None
    logs = {int(k): complex(*v) if isinstance(v, (list, tuple)) else complex(v)
            for k, v in (spec.get("cut_jump_logs") or {}).items()}
    if amp < 0:
        raise SchemaError("reflection.amplitude must be non-negative", amplitude=amp)
    if amp == 0:
        return ScatteringData("zero", cut_jump_logs=logs)
    return ScatteringData("rational", amp, scale, phase, cut_jump_logs=logs)
