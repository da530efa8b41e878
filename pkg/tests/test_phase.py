import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finitegap_nls.phase import (cubic_h3, cubic_reference_constant, eval_theta_phase, find_collisions, genus1_roots,
                                 stationary_points, theta_derivative)
from finitegap_nls.surface import BranchSet, SurfacePoint, build_surface

from conftest import ASYMMETRIC_G1, G2, SYMMETRIC_G1, phase_model

G0 = BranchSet((0.3 + 1j,))


def _slope(r1, v1, r2, v2):
    return math.log(v2 / v1) / math.log(r2 / r1)


def test_genus0_closed_form():
    pm = phase_model(G0)
    assert np.allclose(pm.fhat, [-0.3, 1.0], atol=1e-12)
    assert abs(pm.f0 + 0.3) < 1e-10
    for z in (2 + 1j, -3 + 0.5j, 0.7 - 2j):
        assert abs(pm.f(SurfacePoint(z)) - pm.geometry.w(z)) < 1e-10


@pytest.mark.parametrize("branch", [SYMMETRIC_G1, ASYMMETRIC_G1, G2])
def test_cut_constancy_and_sign(branch):
    pm = phase_model(branch)
    for k in range(branch.genus + 1):
        sums = [pm.f_on_cut(k, phi, 1) + pm.f_on_cut(k, phi, -1) for phi in (-1.2, -0.4, 0.3, 1.1)]
        assert np.ptp(np.real(sums)) + np.ptp(np.imag(sums)) < 1e-8
        for phi in (-1.1, 0.2, 0.8):
            assert abs(pm.f_on_cut(k, phi, 1).imag + pm.f_on_cut(k, phi, -1).imag) < 1e-10


@pytest.mark.parametrize("branch", [G0, ASYMMETRIC_G1])
def test_large_z_expansions(branch):
    pm = phase_model(branch)
    radii = (1e3, 2e3)
    fr, gr = [], []
    for R in radii:
        z = R * np.exp(0.3j)
        fr.append(abs(pm.f(SurfacePoint(z)) - z - pm.f0))
        gr.append(abs(pm.g(SurfacePoint(z)) - 2 * z * z - pm.g0))
    assert abs(_slope(radii[0], fr[0], radii[1], fr[1]) + 1) < 0.05
    assert abs(_slope(radii[0], gr[0], radii[1], gr[1]) + 1) < 0.05


def test_leading_coefficients_follow_the_expansion():
    rng = np.random.default_rng(7)
    for _ in range(3):
        b = BranchSet((complex(rng.uniform(-2, -0.5), rng.uniform(0.5, 1.5)),
                       complex(rng.uniform(0.5, 2), rng.uniform(0.5, 1.5))))
        rep = phase_model(b).diagnostics["leading_coefficients"]
        assert abs(rep["fhat_n"] - rep["fhat_n_closed"]) < 1e-9
        assert abs(rep["ghat_n1"] - rep["ghat_n1_from_expansion"]) < 1e-9
        assert abs(rep["ghat_n"] - rep["ghat_n_from_expansion"]) < 1e-9


@pytest.mark.parametrize("branch", [SYMMETRIC_G1, ASYMMETRIC_G1, G2])
def test_phase_real_at_branch_point_and_infinity(branch):
    pm = phase_model(branch)
    xi = 0.7
    assert abs(eval_theta_phase(pm, SurfacePoint(branch.E[0]), xi).imag) < 1e-8
    consts = []
    for R in (1e3, 2e3):
        z = R * np.exp(0.2j)
        consts.append(eval_theta_phase(pm, SurfacePoint(z), xi) - (2 * z * z + xi * z))
    # the constant is zero by construction; the Richardson step removes the 1/z term
    c = 2 * consts[1] - consts[0]
    assert abs(c.imag) < 1e-4


@given(st.complex_numbers(max_magnitude=4, allow_nan=False).filter(lambda z: abs(z.imag) > 0.05
                                                                     and min(abs(z.real + 2), abs(z.real), abs(z.real - 2)) > 0.05))
@settings(max_examples=20, deadline=None)
def test_schwarz_symmetry_of_phase(z):
    pm = phase_model(G2)
    a = eval_theta_phase(pm, SurfacePoint(z), 0.4)
    b = eval_theta_phase(pm, SurfacePoint(z.conjugate()), 0.4)
    assert abs(a - b.conjugate()) < 1e-9 * (1 + abs(a))


def test_xi_zero_roots_are_roots_of_ghat():
    pm = phase_model(G2)
    port = stationary_points(pm, 0.0)
    roots = np.concatenate([port.real_points, np.ravel([[c, np.conj(c)] for c in port.complex_pairs])])
    want = np.polynomial.polynomial.polyroots(pm.ghat)
    assert np.allclose(np.sort_complex(roots), np.sort_complex(want), atol=1e-9)


@given(st.floats(-20, 20))
@settings(max_examples=30, deadline=None)
def test_genus0_root_sum(xi):
    port = stationary_points(phase_model(G0), xi)
    roots = list(port.real_points) + [v for c in port.complex_pairs for v in (c, np.conj(c))]
    assert len(roots) == 2
    assert abs(sum(roots) - (0.3 - xi / 4)) < 1e-10


@given(st.floats(-12, 12))
@settings(max_examples=40, deadline=None)
def test_moment_identities(xi):
    port = stationary_points(phase_model(G2), xi)
    assert max(port.moment_residuals) < 1e-6


FLAT_G1 = BranchSet((-1 + 0.5j, 1 + 0.5j))


# (+-1 + i) at xi = 0 gives h = 4 z^3, a triple root, hence the flatter data there
@pytest.mark.parametrize("branch, xi", [(FLAT_G1, 0.0), (FLAT_G1, 2.0), (SYMMETRIC_G1, 3.0), (SYMMETRIC_G1, -7.5)])
def test_genus1_trig_roots_match_companion(branch, xi):
    pm = phase_model(branch)
    port = stationary_points(pm, xi)
    cubic = genus1_roots(branch, xi, cubic_h3(pm.geometry, xi))
    companion = np.polynomial.polynomial.polyroots(pm.h(xi))
    for r in cubic.roots:
        assert np.min(np.abs(companion - r)) < 1e-9
    if not port.complex_pairs:
        assert np.allclose(sorted(np.real(cubic.roots)), port.real_points, atol=1e-10)


def test_reference_constant_formula():
    rng = np.random.default_rng(3)
    for _ in range(5):
        B0, B1 = rng.uniform(-2, 2, 2)
        A0, A1 = rng.uniform(0.2, 2, 2)
        want = (3 * (A0 ** 2 + A1 ** 2) - 2 * (B0 - B1) ** 2) / 6
        assert abs(cubic_reference_constant(BranchSet((complex(B0, A0), complex(B1, A1)))) - want) < 1e-14


@pytest.mark.parametrize("branch", [G0, SYMMETRIC_G1, ASYMMETRIC_G1, G2])
def test_collisions(branch):
    pm = phase_model(branch)
    events = find_collisions(pm)
    assert 1 <= len(events) <= 2 * branch.genus + 2
    for e in events:
        assert e.theta1 < 1e-7 and e.theta2 < 1e-7 and abs(e.theta3) > 1e-3


def test_collision_discriminant_gives_double_root():
    pm = phase_model(SYMMETRIC_G1)
    for e in find_collisions(pm):
        cubic = genus1_roots(SYMMETRIC_G1, e.xi_j, cubic_h3(pm.geometry, e.xi_j))
        r = np.array(cubic.roots)
        gaps = [abs(r[i] - r[j]) for i in range(3) for j in range(i + 1, 3)]
        assert min(gaps) < 1e-6


def test_roots_split_like_square_root_near_collision():
    pm = phase_model(ASYMMETRIC_G1)
    e = find_collisions(pm)[0]
    t3 = float(np.real(e.theta3))
    for h in (1e-4, 4e-4):
        # d theta'/d xi at z_j is f'(z_j); theta' ~ f' dxi + theta''' (z - z_j)^2 / 2
        fprime = float(np.real(theta_derivative(pm, e.z_j, 1.0, 1) - theta_derivative(pm, e.z_j, 0.0, 1)))
        sign = 1 if -2 * fprime * h / t3 > 0 else -1
        pts = np.array(stationary_points(pm, e.xi_j + sign * h).real_points)
        near = np.sort(pts[np.argsort(np.abs(pts - e.z_j))[:2]])
        off = math.sqrt(-2 * fprime * sign * h / t3)
        assert np.max(np.abs(near - (e.z_j + np.array([-off, off])))) < 20 * h


@pytest.mark.parametrize("E", [(-0.8 + 2j, 1 + 2j), (-1 + 2.5j, 1 + 2.5j)])
def test_genus1_real_collision_below_left_centre(E):
    b = BranchSet(E)
    B0 = b.B[0]
    C = cubic_reference_constant(b)
    assert C > 3 * B0 ** 2
    threshold = 6 * abs(B0) + 2 * C / abs(B0)
    # decreasing xi: complex pair lands first, then two real roots merge
    large = sorted((e for e in find_collisions(phase_model(b)) if e.xi_j > threshold), key=lambda e: -e.xi_j)
    assert len(large) == 2
    assert large[1].z_j < B0
