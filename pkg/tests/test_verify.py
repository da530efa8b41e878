import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finitegap_nls.errors import DomainError, SchemaError
from finitegap_nls.verify import FieldGrid, energy, fd4_dxx, mass, nls_residual, split_step, spectral_dxx


def plane_wave(A, k):
    w = k * k - 2 * A * A
    return lambda x, t: A * np.exp(1j * (k * x - w * t))


def test_zero_field_has_zero_residual():
    grid = FieldGrid.periodic(2 * math.pi, 16, 0.0, 0.01, 8)
    assert nls_residual(lambda x, t: 0.0, grid) == 0.0


def test_plane_wave_residual():
    A, k = 1.3, 0.7
    grid = FieldGrid.periodic(2 * math.pi / k, 32, 0.0, 0.002, 9, wavenumber=k)
    value, report = nls_residual(plane_wave(A, k), grid, report=True)
    assert value < 1e-10
    assert report["nx"] == 32 and report["x_method"] == "spectral"


def test_residual_detects_wrong_dispersion():
    A, k = 1.0, 1.0
    grid = FieldGrid.periodic(2 * math.pi, 32, 0.0, 0.002, 9, wavenumber=k)
    wrong = lambda x, t: A * np.exp(1j * (k * x - 0.5 * t))
    assert nls_residual(wrong, grid) > 0.1


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=-5, max_value=5), st.floats(min_value=0.5, max_value=3.0))
def test_spectral_derivative_of_modes(m, L):
    x = L / 32 * np.arange(32)
    u = np.exp(2j * math.pi * m * x / L)
    assert np.max(np.abs(spectral_dxx(u, L) + (2 * math.pi * m / L) ** 2 * u)) < 1e-8 * (1 + m * m)


def test_fd4_is_exact_on_quintics():
    x = np.linspace(-1, 1, 41)
    u = x ** 5 - 2 * x ** 3 + x
    assert np.max(np.abs(fd4_dxx(u, x[1] - x[0]) - (20 * x ** 3 - 12 * x + 0 * x)[2:-2])) < 1e-9


def test_fd4_residual_on_window():
    A, k = 0.8, 0.3
    grid = FieldGrid(-1.0, 0.02, 64, 0.0, 0.01, 9)
    assert nls_residual(plane_wave(A, k), grid, x_method="fd4") < 1e-6


def test_grid_validation():
    with pytest.raises(SchemaError):
        FieldGrid(0.0, 0.1, 30, 0.0, 0.1, 9)
    with pytest.raises(SchemaError):
        FieldGrid(0.0, 0.1, 32, 0.0, 0.1, 4)
    with pytest.raises(SchemaError):
        nls_residual(None, FieldGrid(0.0, 0.1, 32, 0.0, 0.1, 9))


def test_split_step_keeps_plane_wave():
    A, L, n = 1.0, 2 * math.pi, 64
    x = L / n * np.arange(n)
    q0 = A * np.exp(1j * x)
    q = split_step(q0, 1e-3, 1000, L)
    assert np.max(np.abs(np.abs(q) - A)) < 1e-9
    exact = plane_wave(A, 1.0)(x, 1.0)
    assert np.max(np.abs(q - exact)) < 1e-8


def test_split_step_conservation_and_order():
    L, n = 2 * math.pi, 128
    x = L / n * np.arange(n)
    q0 = 0.5 + 0.2 * np.cos(x) + 0.1j * np.sin(2 * x)
    T = 0.5
    ref = split_step(q0, T / 4000, 4000, L)
    errs = [np.max(np.abs(split_step(q0, T / s, s, L) - ref)) for s in (50, 100)]
    assert 3.5 < errs[0] / errs[1] < 4.5
    q = split_step(q0, T / 500, 500, L)
    assert abs(mass(q, L) - mass(q0, L)) < 1e-8 * mass(q0, L)
    assert abs(energy(q, L) - energy(q0, L)) < 1e-3 * abs(energy(q0, L))


def test_split_step_guards():
    q0 = np.full(16, 10.0 + 0j)
    with pytest.raises(DomainError):
        split_step(q0, 0.1, 1, 1.0)
    with pytest.raises(SchemaError):
        split_step(np.ones(12), 0.1, 1, 1.0)
