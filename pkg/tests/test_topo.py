import math

import numpy as np
import pytest

from hopflink.errors import BandDegeneracy, CurvesTooClose, DomainMismatch, OpenCurve
from hopflink.hmap import ConstantNorth, HopfS3, PontrjaginS2, pontrjagin_index
from hopflink.manifold import build_grid, build_sphere_grid
from hopflink.topo import (
    CS_UNIT,
    SPIN1,
    Polyline3,
    chern_number,
    chern_simons_raw,
    linking_number,
    spin1_identity_field,
)


def circle(center, u, v, n=512, radius=1.0):
    s = 2 * math.pi * np.arange(n) / n
    pts = np.asarray(center) + radius * (np.outer(np.cos(s), u) + np.outer(np.sin(s), v))
    return Polyline3.loop(pts)


X, Y, Z = np.eye(3)


class TestChern:
    def test_monopole(self):
        r = chern_number(PontrjaginS2(1))
        assert r.raw == pytest.approx(0.5, abs=1e-8)
        assert r.rounded == 0.5 and r.normalized == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("n", range(5))
    def test_quantization(self, n):
        r = chern_number(PontrjaginS2(n))
        assert abs(r.raw - n / 2) < 1e-8
        assert abs(pontrjagin_index(PontrjaginS2(n)).raw - 2 * r.raw) < 1e-8

    def test_warped_map_same_invariant(self):
        assert chern_number(PontrjaginS2(2, warp=0.4)).raw == pytest.approx(1.0, abs=1e-8)

    def test_constant_map(self):
        assert abs(chern_number(ConstantNorth()).raw) < 1e-14

    def test_plaquette_matches_formula(self):
        r = chern_number(PontrjaginS2(1), (48, 96), method="plaquette")
        assert r.raw == pytest.approx(0.5, abs=1e-10)
        r = chern_number(PontrjaginS2(3), (64, 128), method="plaquette")
        assert r.raw == pytest.approx(1.5, abs=1e-10)

    def test_spin1_matrices(self):
        comm = SPIN1[0] @ SPIN1[1] - SPIN1[1] @ SPIN1[0]
        assert np.allclose(comm, 1j * SPIN1[2])
        H = spin1_identity_field(0.7, 2.1)
        assert np.allclose(np.linalg.eigvalsh(H), [-1, 0, 1])

    def test_spin1_band(self):
        r = chern_number(spin1_identity_field, (64, 128))
        assert r.raw == pytest.approx(1.0, abs=1e-6)
        assert r.rounded == 1

    def test_degenerate_band(self):
        with pytest.raises(BandDegeneracy):
            # the two bands cross where cos(phi) changes sign
            chern_number(lambda th, ph: np.einsum("...,ij->...ij", np.cos(ph), np.diag([1.0, -1.0])).astype(complex), (16, 32))

    def test_domain(self):
        with pytest.raises(DomainMismatch):
            chern_number(HopfS3(1))

    def test_grid_refinement(self):
        a = chern_number(PontrjaginS2(3, warp=0.3), build_sphere_grid(128, 256)).raw
        b = chern_number(PontrjaginS2(3, warp=0.3), build_sphere_grid(256, 512)).raw
        assert abs(a - b) < 1e-8

    def test_result_reports_deviation(self):
        r = chern_number(PontrjaginS2(1), (16, 32))
        d = r.to_dict()
        assert set(d) >= {"raw", "normalized", "rounded", "residual"}
        assert d["deviation"] == pytest.approx(abs(r.raw - 0.5))


class TestChernSimons:
    def test_m0(self):
        assert abs(chern_simons_raw(HopfS3(0)).raw) < 1e-14

    def test_m1(self):
        r = chern_simons_raw(HopfS3(1, True))
        assert abs(r.raw - (-4 * math.pi**2)) < 1e-8
        assert r.rounded == pytest.approx(CS_UNIT)
        assert r.normalized == pytest.approx(r.raw / (4 * math.pi))

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_quadratic_scaling(self, m):
        ratio = chern_simons_raw(HopfS3(m)).raw / chern_simons_raw(HopfS3(1)).raw
        assert abs(ratio - m * m) < 1e-8

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_deformation_invariance(self, m):
        a = chern_simons_raw(HopfS3(m, deformed=True)).raw
        b = chern_simons_raw(HopfS3(m, deformed=False)).raw
        assert abs(a - b) < 1e-6

    def test_grid_refinement(self):
        a = chern_simons_raw(HopfS3(2), build_grid(48, 16, 16)).raw
        b = chern_simons_raw(HopfS3(2), build_grid(96, 32, 32)).raw
        assert abs(a - b) < 1e-8

    def test_metadata(self):
        meta = chern_simons_raw(HopfS3(1)).metadata
        assert "orientation" in meta and "gauge" in meta

    def test_domain(self):
        with pytest.raises(DomainMismatch):
            chern_simons_raw(PontrjaginS2(1))


class TestLinking:
    def test_unlinked(self):
        a = circle([0, 0, 0], X, Y)
        b = circle([10, 0, 0], X, Y)
        assert abs(linking_number(a, b)) < 1e-6

    def test_hopf_link(self):
        a = circle([0, 0, 0], X, Y)
        b = circle([1, 0, 0], X, Z)
        assert abs(abs(linking_number(a, b)) - 1) < 1e-4

    def test_symmetry_and_reversal(self):
        a = circle([0, 0, 0], X, Y, n=256)
        b = circle([1, 0, 0], X, Z, n=300)
        lk = linking_number(a, b)
        assert abs(lk - linking_number(b, a)) < 1e-9
        assert abs(lk + linking_number(a.reversed(), b)) < 1e-9
        assert abs(lk + linking_number(a, b.reversed())) < 1e-9

    def test_torus_curve_and_meridian(self):
        # a curve on a torus about z misses the small disk at the origin
        s = 2 * math.pi * np.arange(1024) / 1024
        core = circle([0, 0, 0], X, Y, n=512, radius=2.0)
        wind = np.stack([(2 + 0.5 * np.cos(2 * s)) * np.cos(s),
                         (2 + 0.5 * np.cos(2 * s)) * np.sin(s),
                         0.5 * np.sin(2 * s)], axis=1)
        axis = circle([0, 0, 0], X, Y, n=512, radius=0.01)
        assert abs(abs(linking_number(Polyline3.loop(wind), axis)) - 0) < 1e-6
        # a meridian of the core circle links it once
        lk = linking_number(core, circle([2, 0, 0], X, Z, n=256, radius=0.5))
        assert abs(abs(lk) - 1) < 1e-4

    def test_open_curve(self):
        pts = np.stack([np.linspace(0, 1, 20), np.zeros(20), np.zeros(20)], axis=1)
        with pytest.raises(OpenCurve):
            Polyline3(pts, closed=True)
        with pytest.raises(OpenCurve):
            linking_number(Polyline3(pts, closed=False), circle([0, 0, 0], X, Y))

    def test_too_close(self):
        a = circle([0, 0, 0], X, Y)
        with pytest.raises(CurvesTooClose):
            linking_number(a, circle([2, 0, 0], X, Y))

    def test_minimum_segments(self):
        with pytest.raises(ValueError):
            circle([0, 0, 0], X, Y, n=8)

    def test_bisected_keeps_shape(self):
        a = circle([0, 0, 0], X, Y, n=32)
        b = a.bisected()
        assert b.n_segments == 64
        assert np.array_equal(b.points[::2], a.points)
