import math

import numpy as np
import pytest

from curveclust import (
    GeodesicUndefinedError,
    OutOfInjectivityError,
    Srvf,
    align,
    exp_sphere,
    geodesic,
    geodesic_distance,
    inner,
    log_quotient,
    log_sphere,
    optimal_rotation,
    optimal_warping,
    project_sphere,
    warp_srvf,
)
from curveclust._kernels import dp_warp
from curveclust.curves import uniform_grid
from curveclust.elastic import rotate_srvf
from curveclust.srvf import norm as srvf_norm, trapezoid_weights

from conftest import smooth_warp, unit_srvf


def orthogonal_unit_pair(n=400):
    t = uniform_grid(n)
    q0 = project_sphere(Srvf(np.sqrt(2.0) * np.sin(2 * np.pi * t)[:, None]))
    q1 = project_sphere(Srvf(np.sqrt(2.0) * np.cos(2 * np.pi * t)[:, None]))
    return q0, q1


def rotation_2d(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def random_so(rng, n):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


class TestGeodesic:
    def test_endpoints_exact(self, rng):
        q0 = unit_srvf(rng, 120, 2)
        q1 = unit_srvf(rng, 120, 2)
        np.testing.assert_array_equal(geodesic(q0, q1, 0.0).values, q0.values)
        np.testing.assert_array_equal(geodesic(q0, q1, 1.0).values, q1.values)

    def test_orthogonal_midpoint(self):
        q0, q1 = orthogonal_unit_pair()
        mid = geodesic(q0, q1, 0.5)
        np.testing.assert_allclose(mid.values, (q0.values + q1.values) / np.sqrt(2.0), atol=1e-9)

    def test_coincident_limit(self, rng):
        q0 = unit_srvf(rng, 80, 1)
        for tau in (0.0, 0.3, 1.0):
            np.testing.assert_allclose(geodesic(q0, q0, tau).values, q0.values, atol=1e-12)

    def test_unit_norm_output(self, rng):
        q0 = unit_srvf(rng, 150, 2)
        q1 = unit_srvf(rng, 150, 2)
        for tau in (0.25, 0.5, 0.75):
            g = geodesic(q0, q1, tau)
            assert abs(inner(g, g) - 1.0) <= 1e-8

    def test_antipodal_rejected(self, rng):
        q0 = unit_srvf(rng, 80, 1)
        q1 = Srvf(-q0.values)
        with pytest.raises(GeodesicUndefinedError):
            geodesic(q0, q1, 0.5)


class TestGeodesicDistance:
    def test_zero_for_same(self, rng):
        q0 = unit_srvf(rng, 90, 2)
        assert geodesic_distance(q0, q0) <= 1e-7

    def test_orthogonal_is_right_angle(self):
        q0, q1 = orthogonal_unit_pair()
        assert geodesic_distance(q0, q1) == pytest.approx(np.pi / 2, abs=1e-6)

    def test_matches_inner_product_recomputation(self, rng):
        q0 = unit_srvf(rng, 70, 2)
        q1 = unit_srvf(rng, 70, 2)
        expected = math.acos(max(-1.0, min(1.0, inner(q0, q1))))
        assert geodesic_distance(q0, q1) == expected

    def test_symmetry(self, rng):
        q0 = unit_srvf(rng, 70, 1)
        q1 = unit_srvf(rng, 70, 1)
        assert geodesic_distance(q0, q1) == pytest.approx(geodesic_distance(q1, q0), abs=1e-14)


class TestLogExp:
    def test_log_at_base_is_zero(self, rng):
        q0 = unit_srvf(rng, 80, 2)
        np.testing.assert_array_equal(log_sphere(q0, q0), np.zeros_like(q0.values))

    def test_log_of_orthogonal_target(self):
        q0, q1 = orthogonal_unit_pair()
        v = log_sphere(q0, q1)
        theta = geodesic_distance(q0, q1)
        np.testing.assert_allclose(v, theta * q1.values, atol=1e-6)

    def test_log_norm_equals_distance(self, rng):
        for _ in range(20):
            q0 = unit_srvf(rng, 100, 2)
            q1 = unit_srvf(rng, 100, 2)
            v = log_sphere(q0, q1)
            w = trapezoid_weights(100)
            nv = np.sqrt(np.sum(w * np.sum(v * v, axis=1)))
            assert abs(nv - geodesic_distance(q0, q1)) <= 1e-8

    def test_tangency(self, rng):
        for _ in range(20):
            q0 = unit_srvf(rng, 100, 2)
            q1 = unit_srvf(rng, 100, 2)
            v = log_sphere(q0, q1)
            assert abs(inner(Srvf(v), q0)) <= 1e-8

    def test_exp_of_zero(self, rng):
        q0 = unit_srvf(rng, 60, 1)
        np.testing.assert_array_equal(exp_sphere(q0, np.zeros_like(q0.values)).values, q0.values)

    def test_exp_recovers_orthogonal_target(self):
        q0, q1 = orthogonal_unit_pair()
        out = exp_sphere(q0, (np.pi / 2) * q1.values)
        np.testing.assert_allclose(out.values, q1.values, atol=1e-6)

    def test_exp_rejects_long_vectors(self, rng):
        q0, q1 = orthogonal_unit_pair()
        with pytest.raises(OutOfInjectivityError):
            exp_sphere(q0, 3.3 * q1.values)

    def test_roundtrip(self, rng):
        failures = 0
        for _ in range(100):
            q0 = unit_srvf(rng, 90, 2)
            q1 = unit_srvf(rng, 90, 2)
            if geodesic_distance(q0, q1) >= np.pi - 0.1:
                continue
            back = exp_sphere(q0, log_sphere(q0, q1))
            err = srvf_norm(Srvf(back.values - q1.values))
            if err > 1e-8:
                failures += 1
        assert failures == 0


class TestOptimalRotation:
    def test_identity_for_same(self, rng):
        q0 = unit_srvf(rng, 100, 2)
        np.testing.assert_allclose(optimal_rotation(q0, q0), np.eye(2), atol=1e-10)

    def test_scalar_case(self, rng):
        q0 = unit_srvf(rng, 50, 1)
        q1 = unit_srvf(rng, 50, 1)
        np.testing.assert_array_equal(optimal_rotation(q0, q1), np.eye(1))

    def test_recovers_planted_rotation(self, rng):
        q0 = unit_srvf(rng, 200, 2)
        R0 = rotation_2d(rng.uniform(0.1, 3.0))
        q1 = rotate_srvf(q0, R0.T)
        R = optimal_rotation(q0, q1)
        assert np.linalg.norm(R - R0, "fro") <= 1e-8

    @pytest.mark.parametrize("dim", [2, 3])
    def test_procrustes_optimality(self, rng, dim):
        q0 = unit_srvf(rng, 80, dim)
        q1 = unit_srvf(rng, 80, dim)
        R_star = optimal_rotation(q0, q1)
        best = inner(q0, rotate_srvf(q1, R_star))
        for _ in range(1000):
            R = random_so(rng, dim)
            assert best >= inner(q0, rotate_srvf(q1, R)) - 1e-10


REFINE = 6
STEPS = [(a, b) for a in (1, 2, 3) for b in (1, 2, 3)]


def _refine_mirror(q):
    T, n = q.shape
    m = REFINE * (T - 1) + 1
    out = np.empty((m, n))
    for p in range(m):
        x = p / REFINE
        i = int(x)
        if i > T - 2:
            i = T - 2
        f = x - i
        for d in range(n):
            out[p, d] = (1.0 - f) * q[i, d] + f * q[i + 1, d]
    return out


def _edge_cost_mirror(q0, q1r, i0, j0, a, b, dt):
    rs = math.sqrt(b / a)
    k = (REFINE * b) // a
    base = REFINE * j0
    e = 0.0
    for m in range(a + 1):
        w = 0.5 if (m == 0 or m == a) else 1.0
        p = base + m * k
        s = 0.0
        for d in range(q0.shape[1]):
            diff = q0[i0 + m, d] - rs * q1r[p, d]
            s += diff * diff
        e += w * s
    return e * dt


def brute_force_dp_cost(q0_values, q1_values):
    """Exhaustive minimum over every monotone lattice path with steps in 1..3."""
    T = q0_values.shape[0]
    dt = 1.0 / (T - 1)
    q1r = _refine_mirror(q1_values)
    edges = {}
    for i0 in range(T):
        for j0 in range(T):
            for a, b in STEPS:
                if i0 + a <= T - 1 and j0 + b <= T - 1:
                    edges[(i0, j0, a, b)] = _edge_cost_mirror(q0_values, q1r, i0, j0, a, b, dt)
    best = [math.inf]

    def walk(i, j, acc):
        if i == T - 1 and j == T - 1:
            if acc < best[0]:
                best[0] = acc
            return
        for a, b in STEPS:
            if i + a <= T - 1 and j + b <= T - 1:
                walk(i + a, j + b, acc + edges[(i, j, a, b)])

    walk(0, 0, 0.0)
    return best[0]


class TestOptimalWarping:
    def test_identity_for_same(self, rng):
        q0 = unit_srvf(rng, 120, 1)
        gamma = optimal_warping(q0, q0)
        np.testing.assert_allclose(gamma, uniform_grid(120), atol=1e-12)

    def test_recovers_planted_warp(self, rng):
        q0 = unit_srvf(rng, 200, 1)
        gamma0 = smooth_warp(rng, 200, strength=0.8)
        q1 = project_sphere(warp_srvf(q0, gamma0))
        d0 = srvf_norm(Srvf(q0.values - q1.values))
        gamma = optimal_warping(q0, q1)
        d1 = srvf_norm(Srvf(q0.values - warp_srvf(q1, gamma).values))
        assert d1 <= 0.1 * d0

    def test_never_increases_distance(self, rng):
        for _ in range(100):
            q0 = unit_srvf(rng, 60, 1)
            q1 = unit_srvf(rng, 60, 1)
            gamma = optimal_warping(q0, q1)
            d0 = srvf_norm(Srvf(q0.values - q1.values))
            d1 = srvf_norm(Srvf(q0.values - warp_srvf(q1, gamma).values))
            assert d1 <= d0 + 1e-9

    def test_monotone_pinned_output(self, rng):
        q0 = unit_srvf(rng, 90, 2)
        q1 = unit_srvf(rng, 90, 2)
        gamma = optimal_warping(q0, q1)
        assert gamma[0] == 0.0 and gamma[-1] == 1.0
        assert np.all(np.diff(gamma) >= -1e-15)

    def test_dp_matches_brute_force_small_grids(self, rng):
        for T in (6, 8, 10):
            for _ in range(2):
                q0 = unit_srvf(rng, T, 1, modes=2)
                q1 = unit_srvf(rng, T, 1, modes=2)
                _, cost = dp_warp(q0.values, q1.values)
                assert cost == brute_force_dp_cost(q0.values, q1.values)


class TestAlign:
    def test_same_input_fixed(self, rng):
        q0 = unit_srvf(rng, 100, 1)
        out = align(q0, q0)
        assert geodesic_distance(q0, out) <= 1e-9

    def test_rotated_warped_copy_aligns_back(self, rng):
        q0 = unit_srvf(rng, 200, 2)
        R0 = rotation_2d(rng.uniform(0.2, 2.0))
        gamma0 = smooth_warp(rng, 200, strength=0.6)
        q1 = project_sphere(warp_srvf(rotate_srvf(q0, R0), gamma0))
        d0 = geodesic_distance(q0, q1)
        out = align(q0, q1)
        assert geodesic_distance(q0, out) <= 0.1 * d0

    def test_never_increases_distance(self, rng):
        for _ in range(25):
            q0 = unit_srvf(rng, 80, 2)
            q1 = unit_srvf(rng, 80, 2)
            out = align(q0, q1)
            assert geodesic_distance(q0, out) <= geodesic_distance(q0, q1) + 1e-9

    def test_extra_rounds_are_noops_after_convergence(self, rng):
        # identical inputs converge in the first round, so extra rounds
        # cannot change anything
        q0 = unit_srvf(rng, 150, 1)
        a3 = align(q0, q0, rounds=3)
        a6 = align(q0, q0, rounds=6)
        np.testing.assert_array_equal(a6.values, a3.values)

    def test_more_rounds_never_worse(self, rng):
        q0 = unit_srvf(rng, 150, 1)
        gamma0 = smooth_warp(rng, 150, strength=0.5)
        q1 = project_sphere(warp_srvf(q0, gamma0))
        d3 = geodesic_distance(q0, align(q0, q1, rounds=3))
        d6 = geodesic_distance(q0, align(q0, q1, rounds=6))
        assert d6 <= d3 + 1e-12


class TestLogQuotient:
    def test_zero_for_same(self, rng):
        q0 = unit_srvf(rng, 100, 1)
        np.testing.assert_array_equal(log_quotient(q0, q0), np.zeros_like(q0.values))

    def test_small_for_equivalent_shapes(self, rng):
        q0 = unit_srvf(rng, 200, 2)
        R0 = rotation_2d(rng.uniform(0.2, 2.0))
        gamma0 = smooth_warp(rng, 200, strength=0.5)
        q1 = project_sphere(warp_srvf(rotate_srvf(q0, R0), gamma0))
        v = log_quotient(q0, q1)
        w = trapezoid_weights(200)
        assert np.sqrt(np.sum(w * np.sum(v * v, axis=1))) <= 0.05

    def test_bounded_by_unaligned_distance(self, rng):
        w = trapezoid_weights(90)
        for _ in range(20):
            q0 = unit_srvf(rng, 90, 1)
            q1 = unit_srvf(rng, 90, 1)
            v = log_quotient(q0, q1)
            nv = np.sqrt(np.sum(w * np.sum(v * v, axis=1)))
            assert nv <= geodesic_distance(q0, q1) + 1e-9

    def test_shape_invariance_of_norm(self, rng):
        # q1 at a controlled shape distance from q0 (the regime the Gram
        # relies on); its orbit representatives must score the same
        w = trapezoid_weights(200)
        for _ in range(8):
            q0 = unit_srvf(rng, 200, 2, modes=2)
            tgt = unit_srvf(rng, 200, 2, modes=2)
            u = log_sphere(q0, tgt)
            nu = np.sqrt(np.sum(w * np.sum(u * u, axis=1)))
            q1 = exp_sphere(q0, u * (rng.uniform(0.15, 0.5) / nu))
            R = rotation_2d(rng.uniform(0.0, 2.0 * np.pi))
            gamma = smooth_warp(rng, 200, strength=0.4)
            q1p = project_sphere(warp_srvf(rotate_srvf(q1, R), gamma))
            v = log_quotient(q0, q1)
            vp = log_quotient(q0, q1p)
            n1 = np.sqrt(np.sum(w * np.sum(v * v, axis=1)))
            n2 = np.sqrt(np.sum(w * np.sum(vp * vp, axis=1)))
            assert abs(n1 - n2) <= 5e-2
