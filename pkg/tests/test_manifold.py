import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopflink.errors import PoleError, SizeError
from hopflink.manifold import (
    AngleCoordS2,
    AngleCoordS3,
    build_grid,
    embed_s3,
    integrate,
    laplacian_apply,
    metric_s3,
    s3_embed,
    s3_extract,
    stereographic_project,
)

angles = st.floats(-20, 20, allow_nan=False)
polar = st.floats(0, math.pi)


class TestCoordinates:
    def test_angles_reduced(self):
        p = AngleCoordS3(1.0, -0.5, 7.0)
        assert 0 <= p.alpha < 2 * math.pi and 0 <= p.beta < 2 * math.pi
        assert p.alpha == pytest.approx(2 * math.pi - 0.5)
        assert p.beta == pytest.approx(7.0 - 2 * math.pi)

    def test_t_clamped_within_slack(self):
        assert AngleCoordS3(-5e-13).t == 0.0
        assert AngleCoordS3(math.pi + 5e-13).t == math.pi
        with pytest.raises(ValueError):
            AngleCoordS3(-1e-6)
        with pytest.raises(ValueError):
            AngleCoordS2(math.pi + 1e-6)

    def test_s2_phi_reduced(self):
        assert AngleCoordS2(0.3, -2 * math.pi).phi == 0.0


class TestEmbedding:
    def test_chart_endpoints(self):
        assert np.allclose(s3_embed(AngleCoordS3(0, 0, 0)), [1, 0, 0, 0], atol=1e-15)
        assert np.allclose(s3_embed(AngleCoordS3(math.pi, 0, 0)), [0, 0, 1, 0], atol=1e-15)

    @given(polar, angles, angles)
    def test_unit_norm(self, t, a, b):
        y = s3_embed(AngleCoordS3(t, a, b))
        assert abs(np.linalg.norm(y) - 1) < 1e-14

    @given(st.floats(0.01, math.pi - 0.01), angles, angles)
    def test_round_trip(self, t, a, b):
        p = AngleCoordS3(t, a, b)
        q = s3_extract(s3_embed(p))
        assert q.t == pytest.approx(p.t, abs=1e-12)
        da = (q.alpha - p.alpha + math.pi) % (2 * math.pi) - math.pi
        db = (q.beta - p.beta + math.pi) % (2 * math.pi) - math.pi
        assert abs(da) < 1e-12 and abs(db) < 1e-12

    def test_metric_invariants(self):
        for t in np.linspace(0, math.pi, 7):
            g = metric_s3(t)
            assert g.det == pytest.approx(g.jacobian**2, abs=1e-15)
            assert min(g.g_tt, g.g_aa, g.g_bb) >= 0

    def test_metric_matches_embedding(self):
        # pull back the Euclidean metric of R4 by finite differences
        x0, h = np.array([1.1, 0.4, 2.3]), 1e-6
        J = np.stack([(embed_s3(*(x0 + h * e)) - embed_s3(*(x0 - h * e))) / (2 * h) for e in np.eye(3)])
        g = metric_s3(x0[0])
        assert np.allclose(J @ J.T, np.diag([g.g_tt, g.g_aa, g.g_bb]), atol=1e-9)


class TestStereographic:
    def test_examples(self):
        for beta in (0.0, 1.0, 4.0):
            assert np.allclose(stereographic_project(AngleCoordS3(0, 0, beta)), [1, 0, 0])
        # sin(t/2) = 1 and sin(beta) = -1 give denominator 2, but cos(beta) = 0,
        # so this point projects to the origin
        assert np.allclose(stereographic_project(AngleCoordS3(math.pi, 0, 1.5 * math.pi)), [0, 0, 0], atol=1e-15)
        # z = cos(beta) / (1 - sin(beta)) = -1/2 at sin(beta) = -3/5, cos(beta) = -4/5
        beta = math.atan2(-0.6, -0.8)
        assert np.allclose(stereographic_project(AngleCoordS3(math.pi, 0, beta)), [0, 0, -0.5], atol=1e-15)

    def test_pole_raises(self):
        with pytest.raises(PoleError):
            stereographic_project(AngleCoordS3(math.pi, 0, math.pi / 2))

    def test_formula(self):
        t, a, b = 1.2, 0.7, 2.9
        d = 1 - math.sin(t / 2) * math.sin(b)
        expect = [math.cos(t / 2) * math.cos(a) / d, math.cos(t / 2) * math.sin(a) / d, math.sin(t / 2) * math.cos(b) / d]
        assert np.allclose(stereographic_project(AngleCoordS3(t, a, b)), expect, atol=1e-15)


class TestGrid:
    def test_sizes(self):
        with pytest.raises(SizeError):
            build_grid(3, 8, 8)

    @pytest.mark.parametrize("n", [8, 32])
    def test_volume(self, n):
        g = build_grid(n, n, n)
        total = float(np.sum(g.volume_weights))
        assert abs(total - 2 * math.pi**2) / (2 * math.pi**2) < 1e-12
        assert float(integrate(np.ones(g.shape), g)) == pytest.approx(2 * math.pi**2, rel=1e-12)

    def test_open_rule(self, grid32):
        assert grid32.t.min() > 0 and grid32.t.max() < math.pi
        assert np.all(grid32.volume_weights > 0)

    def test_normalized_harmonic(self, grid32):
        T, A, B = grid32.mesh
        Y = np.cos(T / 2) * np.exp(1j * A) / math.pi
        assert float(integrate(np.abs(Y) ** 2, grid32).real) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("a,b", [(0, 0), (2, 4), (5, 3), (10, 11)])
    def test_quadrature_one_dimensional(self, grid32, a, b):
        # int_0^pi c^a s^b dt = 2 * B((a+1)/2, (b+1)/2) / 2 with c, s of t/2
        T, _, _ = grid32.mesh
        f = np.cos(T / 2) ** a * np.sin(T / 2) ** b
        num = float(integrate(f, grid32, "coordinate")) / (4 * math.pi**2)
        exact = math.gamma((a + 1) / 2) * math.gamma((b + 1) / 2) / math.gamma((a + b) / 2 + 1)
        assert num == pytest.approx(exact, rel=1e-12)

    @pytest.mark.parametrize("m1,m2", [(1, 0), (0, -2), (3, 1)])
    def test_phase_modes_vanish(self, grid32, m1, m2):
        T, A, B = grid32.mesh
        f = np.cos(T / 2) ** 2 * np.exp(1j * (m1 * A + m2 * B))
        assert abs(integrate(f, grid32)) < 1e-13


class TestLaplacian:
    def test_constant(self, grid32):
        assert np.abs(laplacian_apply(np.ones(grid32.shape), grid32)).max() < 1e-9

    def test_eigen_half(self, grid32):
        T, A, _ = grid32.mesh
        f = np.cos(T / 2) * np.exp(1j * A)
        r = laplacian_apply(f, grid32) + 3 * f
        assert np.abs(r).max() < 1e-8

    def test_eigen_one(self, grid32):
        T, _, _ = grid32.mesh
        f = np.cos(T)
        assert np.abs(laplacian_apply(f, grid32) + 8 * f).max() < 1e-8
