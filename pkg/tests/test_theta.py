import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finitegap_nls.errors import ThetaError
from finitegap_nls.theta import ThetaContext, log_theta, theta, theta_quasi_shift, theta_quotient

from conftest import G2, G3, SYMMETRIC_G1, geometry

# sum_N exp(-pi N^2), from an independent 30-digit Jacobi theta evaluation
THETA3_AT_I = 1.0864348112133080146


def _ctx(genus: int) -> ThetaContext:
    branch = {1: SYMMETRIC_G1, 2: G2, 3: G3}[genus]
    return ThetaContext(geometry(branch).tau)


def _point(ctx, re, frac):
    """Point in the fundamental cell: real part re, imaginary part tau @ frac with |frac| <= 1/2."""
    return np.asarray(re) + ctx.tau @ np.asarray(frac)


def test_genus0_is_one():
    ctx = ThetaContext(np.zeros((0, 0)))
    assert theta(ctx, np.zeros(0)) == 1


def test_square_lattice_constant():
    ctx = ThetaContext(np.array([[1j]]))
    assert abs(theta(ctx, [0.0]) - THETA3_AT_I) < 1e-15


def test_quasi_shift_genus1_square():
    ctx = ThetaContext(np.array([[1j]]))
    z = np.array([0.3])
    lhs = theta(ctx, z + 1j)
    rhs = theta_quasi_shift(ctx, z, [0], [1]) * theta(ctx, z)
    assert abs(lhs - rhs) < 1e-10


def test_zero_shift_factor_is_one():
    ctx = _ctx(2)
    assert theta_quasi_shift(ctx, [0.2, 0.1j], [1, -2], [0, 0]) == 1


@pytest.mark.parametrize("genus", [1, 2, 3])
@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_periodicity_evenness_quasiperiodicity(genus, data):
    ctx = _ctx(genus)
    fl = st.floats(-0.5, 0.5)
    z = _point(ctx, data.draw(st.lists(fl, min_size=genus, max_size=genus)),
               data.draw(st.lists(fl, min_size=genus, max_size=genus)))
    j = data.draw(st.integers(0, genus - 1))
    e = np.eye(genus)[j]
    t0 = theta(ctx, z)
    scale = 1 + abs(t0)
    assert abs(theta(ctx, z + e) - t0) < 1e-9 * scale
    assert abs(theta(ctx, -z) - t0) < 1e-9 * scale
    m = e * data.draw(st.sampled_from([-1, 1]))
    lhs = theta(ctx, z + ctx.tau @ m)
    rhs = theta_quasi_shift(ctx, z, np.zeros(genus), m) * t0
    assert abs(lhs - rhs) < 1e-9 * (1 + abs(rhs))


@pytest.mark.parametrize("genus", [1, 2, 3])
def test_truncation_doubling(genus):
    ctx = _ctx(genus)
    wide = ThetaContext(ctx.tau, tol=ctx.tol, radius=2 * ctx.radius)
    rng = np.random.default_rng(genus)
    for _ in range(20):
        z = _point(ctx, rng.uniform(-0.5, 0.5, genus), rng.uniform(-0.5, 0.5, genus))
        assert abs(theta(ctx, z) - theta(wide, z)) < ctx.tol


def test_vectorised_matches_scalar():
    ctx = _ctx(2)
    zs = np.array([[0.1, 0.2j], [0.3 + 0.1j, -0.4]])
    vec = theta(ctx, zs)
    assert np.allclose(vec, [theta(ctx, z) for z in zs], rtol=0, atol=1e-15)


def test_log_theta_far_from_cell():
    ctx = _ctx(1)
    z = np.array([0.2 + 0.3j])
    far = z + 3 * ctx.tau[0]
    got = np.exp(log_theta(ctx, far))
    want = theta_quasi_shift(ctx, z, [0], [3]) * theta(ctx, z)
    assert abs(got - want) < 1e-9 * abs(want)


def test_quotient_of_equal_arguments():
    ctx = _ctx(2)
    z = np.array([0.1 + 0.2j, -0.3])
    assert abs(theta_quotient(ctx, [z], [-z]) - 1) < 1e-14


def test_rejects_indefinite_imaginary_part():
    with pytest.raises(ThetaError):
        ThetaContext(np.array([[1 + 0j]]))
