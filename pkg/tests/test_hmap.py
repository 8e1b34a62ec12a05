import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopflink.errors import DomainMismatch
from hopflink.hmap import (
    ConstantNorth,
    HopfS3,
    PontrjaginS2,
    cot_power_profile,
    eval_map,
    format_map_spec,
    h_derivatives,
    h_derivatives_fd,
    h_field,
    parse_map_spec,
    pontrjagin_index,
)
from hopflink.manifold import AngleCoordS2, AngleCoordS3


class TestProfile:
    @pytest.mark.parametrize("p", [1, 2, 3, 7])
    def test_matches_arccot(self, p):
        x = np.linspace(0.05, math.pi - 0.05, 41)
        val, _ = cot_power_profile(x, p)
        # 2 arccot(y) = pi - 2 atan(y) for real y
        expect = math.pi - 2 * np.arctan(1 / np.tan(x / 2) ** p)
        assert np.allclose(val, expect, atol=1e-13)

    @pytest.mark.parametrize("p", [1, 2, 5])
    def test_derivative(self, p):
        x = np.linspace(0.1, math.pi - 0.1, 17)
        h = 1e-6
        num = (cot_power_profile(x + h, p)[0] - cot_power_profile(x - h, p)[0]) / (2 * h)
        assert np.allclose(cot_power_profile(x, p)[1], num, atol=1e-8)

    def test_endpoints_large_power(self):
        val, der = cot_power_profile(np.array([0.0, math.pi / 2, math.pi]), 40)
        assert np.allclose(val, [0, math.pi / 2, math.pi], atol=1e-15)
        assert np.all(np.isfinite(der))


class TestEvalMap:
    def test_hopf_north(self):
        assert np.allclose(eval_map(HopfS3(1, True), AngleCoordS3(0, 0.3, 1.0)), [0, 0, 1])

    def test_hopf_substitution(self):
        # azimuth m(beta - alpha); see the module docstring
        h = eval_map(HopfS3(1, True), AngleCoordS3(math.pi / 2, math.pi / 4, 0))
        assert np.allclose(h, [math.sqrt(2) / 2, -math.sqrt(2) / 2, 0], atol=1e-15)

    @given(st.floats(0, math.pi), st.floats(0, 2 * math.pi))
    def test_identity_map(self, th, ph):
        h = eval_map(PontrjaginS2(1), AngleCoordS2(th, ph))
        p = AngleCoordS2(th, ph)
        expect = [math.sin(p.theta) * math.cos(p.phi), math.sin(p.theta) * math.sin(p.phi), math.cos(p.theta)]
        assert np.allclose(h, expect, atol=1e-14)

    def test_domain_mismatch(self):
        with pytest.raises(DomainMismatch):
            eval_map(PontrjaginS2(1), AngleCoordS3(1.0))
        with pytest.raises(DomainMismatch):
            eval_map(HopfS3(1), AngleCoordS2(1.0))

    def test_constant_on_both(self):
        assert np.allclose(eval_map(ConstantNorth(), AngleCoordS2(1.0)), [0, 0, 1])
        assert np.allclose(eval_map(ConstantNorth(), AngleCoordS3(1.0, 2.0, 3.0)), [0, 0, 1])

    @pytest.mark.parametrize("spec", [HopfS3(1), HopfS3(3), HopfS3(2, True), PontrjaginS2(4), PontrjaginS2(2, 0.5)])
    def test_unit_vectors_dense(self, spec):
        rng = np.random.default_rng(4)
        n = 2000
        coords = [rng.uniform(0, math.pi, n)] + [rng.uniform(0, 2 * math.pi, n) for _ in range(len(spec_dims(spec)) - 1)]
        h = h_field(spec, *coords)
        assert np.abs(np.linalg.norm(h, axis=-1) - 1).max() < 1e-12

    @pytest.mark.parametrize("spec", [HopfS3(1), HopfS3(1, True), HopfS3(3)])
    def test_pole_limits(self, spec):
        assert np.allclose(h_field(spec, 0.0, 0.4, 1.3), [0, 0, 1], atol=1e-15)
        assert np.allclose(h_field(spec, math.pi, 0.4, 1.3), [0, 0, -1], atol=1e-15)


def spec_dims(spec):
    return (0, 1, 2) if spec.domain == "S3" else (0, 1)


class TestDerivatives:
    @pytest.mark.parametrize("spec,x", [
        (HopfS3(1), (0.9, 0.3, 1.7)),
        (HopfS3(2, True), (2.1, 4.0, 0.2)),
        (HopfS3(3), (1.4, 1.0, 5.0)),
        (PontrjaginS2(1), (0.7, 2.0)),
        (PontrjaginS2(3, -0.4), (2.2, 5.1)),
    ])
    def test_closed_form_vs_fd(self, spec, x):
        assert np.allclose(h_derivatives(spec, *x), h_derivatives_fd(spec, x), atol=1e-9)

    def test_hopf_alpha_beta_antisymmetric(self):
        d = h_derivatives(HopfS3(2), 1.0, 0.5, 0.8)
        assert np.allclose(d[1], -d[2])


class TestPontrjagin:
    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
    def test_index(self, n):
        r = pontrjagin_index(PontrjaginS2(n))
        assert abs(r.raw - n) < 1e-8
        assert r.rounded == n

    def test_constant(self):
        assert pontrjagin_index(ConstantNorth()).raw == 0.0

    @pytest.mark.parametrize("warp", [-0.7, 0.3, 0.9])
    def test_reparametrization_invariance(self, warp):
        assert abs(pontrjagin_index(PontrjaginS2(2, warp)).raw - 2) < 1e-6

    def test_domain(self):
        with pytest.raises(DomainMismatch):
            pontrjagin_index(HopfS3(1))


class TestSpecText:
    @pytest.mark.parametrize("text,spec", [
        ("hopf:m=2,deformed=true", HopfS3(2, True)),
        ("hopf:m=1,deformed", HopfS3(1, True)),
        ("hopf:m=0", HopfS3(0)),
        ("pontrjagin:n=3", PontrjaginS2(3)),
        ("constant", ConstantNorth()),
    ])
    def test_parse(self, text, spec):
        assert parse_map_spec(text) == spec
        assert parse_map_spec(format_map_spec(spec)) == spec

    @pytest.mark.parametrize("bad", ["hopf:q=1", "torus:n=1", "hopf:m=-1", "pontrjagin:n=1.5", "hopf:m=1,deformed=maybe"])
    def test_reject(self, bad):
        with pytest.raises(ValueError):
            parse_map_spec(bad)
