import json
import math
from fractions import Fraction

import numpy as np
import pytest

from hopflink.errors import InvalidLabel, LadderBottom
from hopflink.harmonics import (
    GENERATORS,
    Harmonic,
    HarmonicLabel,
    TrigPoly,
    apply_generator,
    casimir_apply,
    eval_harmonic,
    generate,
    gram_matrix,
    highest_weight,
    inner_product,
    l_dot_m_apply,
    labels,
    labels_upto,
    lower_I,
    lower_K,
)
from hopflink.manifold import AngleCoordS3, build_grid, embed_s3, l2_norm
from hopflink.surd import Surd

S = Surd.sqrt
half = Fraction(1, 2)

# Closed forms of the tabulated harmonics, written as radial parts times pi:
# {(a, b): c} means sum c cos^a(t/2) sin^b(t/2); sin t = 2 c s, cos t = c^2 - s^2.
TABLE = {
    (0, 0, 0): {(0, 0): S(half)},
    (1, 1, 0): {(1, 0): Surd(1)},
    (1, 0, 1): {(0, 1): Surd(-1)},
    (1, 0, -1): {(0, 1): Surd(-1)},
    (1, -1, 0): {(1, 0): Surd(-1)},
    (2, 2, 0): {(2, 0): S(Fraction(3, 2))},
    (2, 1, 1): {(1, 1): -S(3)},
    (2, 0, 2): {(0, 2): S(Fraction(3, 2))},
    (2, 1, -1): {(1, 1): -S(3)},
    (2, 0, 0): {(2, 0): -S(Fraction(3, 2)), (0, 2): S(Fraction(3, 2))},
    (2, -1, 1): {(1, 1): S(3)},
    (2, 0, -2): {(0, 2): S(Fraction(3, 2))},
    (2, -1, -1): {(1, 1): S(3)},
    (2, -2, 0): {(2, 0): S(Fraction(3, 2))},
}


def lab(*k):
    return HarmonicLabel(*k)


@pytest.fixture(scope="module")
def grid():
    return build_grid(40, 16, 16)


def smooth(grid):
    # polynomial in the embedding coordinates, hence smooth on S3
    y = embed_s3(*grid.mesh)
    return y[..., 0] ** 2 * y[..., 3] + 2j * y[..., 1] * y[..., 2] + y[..., 0] - 0.5 * y[..., 3] ** 2


class TestLabels:
    def test_weights(self):
        L = lab(2, 1, -1)
        assert (L.mI, L.mK, L.j) == (0, 1, 1)
        assert HarmonicLabel.from_weights(2, 0, 2) == L
        assert L.ket() == "|1,0,1>"

    @pytest.mark.parametrize("bad", [(1, 1, 1), (2, 3, 1), (2, 1, 3), (-1, 0, 0), (0, 0, 1)])
    def test_invalid(self, bad):
        with pytest.raises(InvalidLabel):
            HarmonicLabel(*bad)

    @pytest.mark.parametrize("two_j", range(6))
    def test_count(self, two_j):
        assert len(labels(two_j)) == (two_j + 1) ** 2
        assert len(set(labels(two_j))) == (two_j + 1) ** 2

    def test_table_order(self):
        order = [(lb.m1, lb.m2) for lb in labels(2)]
        assert order == [(2, 0), (1, 1), (0, 2), (1, -1), (0, 0), (-1, 1), (0, -2), (-1, -1), (-2, 0)]


class TestTrigPoly:
    def test_derivative_numeric(self):
        P = TrigPoly({(3, 1): 2 * S(5), (1, 3): S(5)})
        t = np.linspace(0.1, 3.0, 30)
        h = 1e-6
        assert np.allclose(P.d_t()(t), (P(t + h) - P(t - h)) / (2 * h), atol=1e-8)

    def test_tan_cot(self):
        P = TrigPoly({(3, 1): Surd(1)})
        t = np.linspace(0.2, 3.0, 9)
        assert np.allclose(P.times_tan()(t), np.tan(t / 2) * P(t))
        assert np.allclose(P.times_cot()(t), P(t) / np.tan(t / 2))
        assert TrigPoly({(0, 2): Surd(1)}).times_cot().is_polynomial()
        assert not TrigPoly({(0, 2): Surd(1)}).times_tan().is_polynomial()


class TestConstruction:
    def test_highest_weight_examples(self):
        assert highest_weight(0).radial == TrigPoly(TABLE[(0, 0, 0)])
        assert highest_weight(1).radial == TrigPoly({(1, 0): Surd(1)})
        assert highest_weight(2).radial == TrigPoly({(2, 0): S(Fraction(3, 2))})
        assert highest_weight(1).label == lab(1, 1, 0)

    def test_lower_examples(self):
        h = lower_I(highest_weight(1))
        assert h.label == lab(1, 0, -1) and h.radial == TrigPoly({(0, 1): Surd(-1)})
        h = lower_K(highest_weight(2))
        assert h.label == lab(2, 1, 1) and h.radial == TrigPoly({(1, 1): -S(3)})

    def test_ladder_bottom(self):
        with pytest.raises(LadderBottom):
            lower_I(highest_weight(0))
        with pytest.raises(LadderBottom):
            lower_K(generate(lab(2, -2, 0)))

    @pytest.mark.parametrize("key", list(TABLE))
    @pytest.mark.parametrize("order", ["IK", "KI"])
    def test_table_exact(self, key, order):
        assert generate(lab(*key), order).radial == TrigPoly(TABLE[key])

    @pytest.mark.parametrize("two_j", range(7))
    def test_order_independence(self, two_j):
        for L in labels(two_j):
            assert generate(L, "IK") == generate(L, "KI")

    @pytest.mark.parametrize("two_j", range(7))
    def test_homogeneous_degree(self, two_j):
        for L in labels(two_j):
            assert generate(L).radial.degree == two_j

    def test_eval_examples(self):
        assert eval_harmonic(generate(lab(0, 0, 0)), AngleCoordS3(1.3, 0.2, 5.0)) == pytest.approx(
            1 / (math.sqrt(2) * math.pi), abs=1e-15
        )
        assert 1 / (math.sqrt(2) * math.pi) == pytest.approx(0.2250791, abs=1e-7)
        assert eval_harmonic(generate(lab(1, 1, 0)), AngleCoordS3(0, 0, 0)) == pytest.approx(1 / math.pi)
        assert abs(eval_harmonic(generate(lab(2, 0, 0)), AngleCoordS3(math.pi / 2, 0, 0))) < 1e-15

    def test_json_round_trip(self):
        for L in labels_upto(4):
            h = generate(L)
            d = json.loads(json.dumps(h.to_dict()))
            assert set(d) >= {"two_j", "m1", "m2", "monomials"}
            assert Harmonic.from_dict(d) == h


class TestInnerProducts:
    def test_examples(self, grid):
        h000, h110, h101, h211 = (generate(lab(*k)) for k in [(0, 0, 0), (1, 1, 0), (1, 0, 1), (2, 1, 1)])
        assert inner_product(h000, h000, grid) == pytest.approx(1, abs=1e-12)
        assert abs(inner_product(h110, h101, grid)) < 1e-14
        assert inner_product(h211, h211, grid) == pytest.approx(1, abs=1e-10)

    def test_gram_identity(self, grid32):
        hs = [generate(L) for L in labels_upto(4)]
        G = gram_matrix(hs, grid32)
        assert np.abs(G - np.eye(len(hs))).max() < 1e-9


class TestGenerators:
    def test_names(self):
        assert {"L1", "M3", "I+", "K-", "I3", "K3"} <= set(GENERATORS)
        with pytest.raises(ValueError):
            apply_generator("Q1", np.zeros((2, 2, 2)), None)

    def test_l3_constant(self, grid):
        assert np.abs(apply_generator("L3", np.ones(grid.shape), grid)).max() < 1e-14

    @pytest.mark.parametrize("two_j", range(5))
    def test_i3_k3(self, grid, two_j):
        for L in labels(two_j):
            Y = generate(L).sample(grid)
            assert l2_norm(apply_generator("I3", Y, grid) - float(L.mI) * Y, grid) < 1e-10
            assert l2_norm(apply_generator("K3", Y, grid) - float(L.mK) * Y, grid) < 1e-10

    def test_k3_example(self, grid):
        Y = generate(lab(2, 1, -1)).sample(grid)
        assert l2_norm(apply_generator("K3", Y, grid) - Y, grid) < 1e-12

    @pytest.mark.parametrize("fam", ["I", "K"])
    def test_numeric_lowering(self, grid, fam):
        for L in labels(3):
            two_m = L.two_mI if fam == "I" else L.two_mK
            if two_m <= -L.two_j:
                continue
            h = generate(L)
            low = lower_I(h) if fam == "I" else lower_K(h)
            coeff = math.sqrt((L.two_j + two_m) * (L.two_j - two_m + 2) / 4)
            got = apply_generator(f"{fam}-", h.sample(grid), grid)
            assert l2_norm(got - coeff * low.sample(grid), grid) < 1e-9

    def test_commutators(self, grid):
        f = smooth(grid)
        g = lambda n, x: apply_generator(n, x, grid)  # noqa: E731
        nf = l2_norm(f, grid)
        for a, b, c in [("L1", "L2", "L3"), ("M1", "M2", "L3"), ("L1", "M2", "M3"), ("M3", "M1", "L2")]:
            comm = g(a, g(b, f)) - g(b, g(a, f)) - 1j * g(c, f)
            assert l2_norm(comm, grid) / nf < 1e-5, (a, b)

    def test_i_k_commute(self, grid):
        f = smooth(grid)
        g = lambda n, x: apply_generator(n, x, grid)  # noqa: E731
        comm = g("I-", g("K-", f)) - g("K-", g("I-", f))
        assert l2_norm(comm, grid) / l2_norm(f, grid) < 1e-9

    def test_transversality_and_casimir(self, grid32):
        for L in labels_upto(4):
            Y = generate(L).sample(grid32)
            n = l2_norm(Y, grid32)
            assert l2_norm(l_dot_m_apply(Y, grid32), grid32) / n < 1e-5
            lam = 4 * float(L.j * (L.j + 1))
            assert l2_norm(casimir_apply(Y, grid32) - lam * Y, grid32) / n < 1e-6
