import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finitegap_nls.errors import DegenerateSurfaceError, SchemaError, SingularityError
from finitegap_nls.surface import BranchSet, SurfacePoint, build_surface, eval_w

from conftest import ASYMMETRIC_G1, G2, G3, SYMMETRIC_G1, geometry

off_cut = st.complex_numbers(min_magnitude=0.0, max_magnitude=6.0, allow_nan=False, allow_infinity=False).filter(
    lambda z: min(abs(z.real - b) for b in (-2.0, 0.0, 2.0, -1.0, 1.0)) > 0.05)


def test_branch_point_is_zero_of_radical():
    geo = geometry(SYMMETRIC_G1)
    assert abs(eval_w(geo, SurfacePoint((-1 - 1j), 1))) < 1e-12


def test_genus0_radical_sign_at_two():
    geo = build_surface(BranchSet((1j,)))
    # w = sqrt(z^2 + 1), fixed by w/z -> 1
    assert abs(geo.w(2.0) - math.sqrt(5.0)) < 1e-13


@given(off_cut)
@settings(max_examples=50, deadline=None)
def test_sheet_antisymmetry(z):
    geo = geometry(G2)
    assert abs(geo.w(z, 1) + geo.w(z, -1)) <= 1e-12 * (1 + abs(geo.w(z, 1)))


def test_radical_tends_to_identity_at_infinity():
    geo = geometry(G2)
    for z in (1e6, 1e6j, -1e6 + 3e5j):
        assert abs(geo.w(z) / z ** 3 - 1) < 1e-5


def test_genus0_has_empty_structures():
    geo = build_surface(BranchSet((0.3 + 1j,)))
    assert geo.tau.shape == (0, 0) and geo.riemann_K.shape == (0,)
    assert geo.abel(SurfacePoint(2.0)).shape == (0,)


@pytest.mark.parametrize("branch", [SYMMETRIC_G1, ASYMMETRIC_G1, G2, G3])
def test_period_matrix_properties(branch):
    geo = geometry(branch)
    d = geo.diagnostics
    assert d["normalisation_residual"] < 1e-8
    assert np.max(np.abs(geo.tau - geo.tau.T)) < 1e-8
    assert min(np.linalg.eigvalsh(geo.tau.imag)) > 0


def test_square_branch_points_give_tau_i():
    # +-1 +- i is invariant under z -> i z, which forces the square lattice
    geo = geometry(SYMMETRIC_G1)
    assert abs(geo.tau[0, 0] - 1j) < 1e-8


@pytest.mark.parametrize("branch", [SYMMETRIC_G1, ASYMMETRIC_G1])
def test_schwarz_symmetric_real_part(branch):
    re = geometry(branch).tau[0, 0].real
    assert min(abs(re - v) for v in (0.0, 0.5, -0.5)) < 1e-8


def test_a_cycle_increment_is_unit_vector():
    geo = geometry(G2)
    for j in range(1, 3):
        assert np.max(np.abs(geo.a_period(j) - np.eye(2)[j - 1])) < 1e-10


def test_abel_base_point_is_zero():
    geo = geometry(G2)
    assert np.max(np.abs(geo.abel(SurfacePoint(geo.branch.E[0].conjugate())))) < 1e-12


@given(off_cut)
@settings(max_examples=15, deadline=None)
def test_sheet_sum_of_abel_map_is_lattice_point(z):
    geo = geometry(SYMMETRIC_G1)
    v = geo.abel(SurfacePoint(z, 1)) + geo.abel(SurfacePoint(z, -1))
    assert np.max(np.abs(geo.reduce_to_lattice(v)[2])) < 1e-8


def test_genus0_cut_integral_closed_form():
    # z = B + i A sin(phi) gives w = +-i A cos(phi) on the cut, so dz/w = +-dphi over (-pi/2, pi/2)
    geo = build_surface(BranchSet((0.3 + 1j,)))
    val = geo.surface.cut_integral(0, lambda z, w: 1.0 / w)
    assert abs(abs(val) - math.pi) < 1e-10


def test_quadrature_order_doubling():
    a = build_surface(ASYMMETRIC_G1, quad_order=24).tau
    b = build_surface(ASYMMETRIC_G1, quad_order=48).tau
    assert np.max(np.abs(a - b)) < 1e-10


def test_point_on_cut_needs_a_side():
    geo = geometry(SYMMETRIC_G1)
    with pytest.raises(SingularityError):
        geo.abel(SurfacePoint(1 + 0.5j))


def test_rejects_coincident_branch_points():
    with pytest.raises((SchemaError, DegenerateSurfaceError)):
        build_surface(BranchSet((1j, 1j)))


def test_rejects_branch_point_on_real_axis():
    with pytest.raises(SchemaError):
        BranchSet((1.0 + 0j, 2 + 1j))
