"""SO(4) spherical harmonics on S3, built exactly by ladder operators.

A harmonic is stored as

    Y_j^{m1,m2} = (1/pi) * P(t) * exp(i m1 alpha + i m2 beta),

with ``P`` a homogeneous :class:`TrigPoly` in ``c = cos(t/2)``,
``s = sin(t/2)`` of total degree ``2j`` whose coefficients are exact surds.
Half-integers are carried as doubled integers: ``two_j``, and internally
``two_mI = m1 + m2`` and ``two_mK = m1 - m2``.

Acting on ``P e^{i m1 a + i m2 b}`` the lowering operators reduce to

    I_-:  e^{i(m1-1)a + i(m2-1)b} * {P' - (m1/2) tan(t/2) P + (m2/2) cot(t/2) P}
    K_-:  e^{i(m1-1)a + i(m2+1)b} * {P' - (m1/2) tan(t/2) P - (m2/2) cot(t/2) P}

and both brackets are again homogeneous trig polynomials, so the whole
construction is a rewrite system on monomials ``c^a s^b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidLabel, LadderBottom
from .manifold import AngleCoordS3, QuadratureGrid, d_alpha, d_beta, d_t, integrate
from .surd import Surd


@dataclass(frozen=True, order=True)
class HarmonicLabel:
    two_j: int
    m1: int
    m2: int

    def __post_init__(self):
        for name in ("two_j", "m1", "m2"):
            v = getattr(self, name)
            if int(v) != v:
                raise InvalidLabel(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        tj, m1, m2 = self.two_j, self.m1, self.m2
        if tj < 0:
            raise InvalidLabel("two_j must be non-negative")
        if abs(m1 + m2) > tj or abs(m1 - m2) > tj:
            raise InvalidLabel(f"|m1 +- m2| exceeds two_j in {(tj, m1, m2)}")
        if (m1 + m2 - tj) % 2:
            raise InvalidLabel(f"m1 + m2 must have the parity of two_j in {(tj, m1, m2)}")

    @classmethod
    def from_weights(cls, two_j: int, two_mI: int, two_mK: int) -> "HarmonicLabel":
        if (two_mI + two_mK) % 2:
            raise InvalidLabel("two_mI and two_mK must have equal parity")
        return cls(two_j, (two_mI + two_mK) // 2, (two_mI - two_mK) // 2)

    @property
    def two_mI(self) -> int:
        return self.m1 + self.m2

    @property
    def two_mK(self) -> int:
        return self.m1 - self.m2

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def mI(self) -> Fraction:
        return Fraction(self.two_mI, 2)

    @property
    def mK(self) -> Fraction:
        return Fraction(self.two_mK, 2)

    def ket(self) -> str:
        return f"|{self.j},{self.mI},{self.mK}>"


def labels(two_j: int) -> list[HarmonicLabel]:
    """All labels of one multiplet, ordered by descending m_I then m_K."""
    out = []
    for two_mI in range(two_j, -two_j - 1, -2):
        for two_mK in range(two_j, -two_j - 1, -2):
            out.append(HarmonicLabel.from_weights(two_j, two_mI, two_mK))
    return out


def labels_upto(two_j_max: int) -> list[HarmonicLabel]:
    return [lab for tj in range(two_j_max + 1) for lab in labels(tj)]


# ---------------------------------------------------------------------------
# trig polynomials


class TrigPoly:
    """``sum c_ab cos^a(t/2) sin^b(t/2)`` with exact surd coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            c = c if isinstance(c, Surd) else Surd(c)
            if not c.is_zero():
                clean[(int(key[0]), int(key[1]))] = c
        self.terms = dict(sorted(clean.items(), reverse=True))

    @classmethod
    def monomial(cls, a: int, b: int, coeff=1) -> "TrigPoly":
        return cls({(a, b): coeff})

    def _combine(self, pieces) -> "TrigPoly":
        acc: dict = {}
        for key, c in pieces:
            acc[key] = acc.get(key, Surd(0)) + c
        return TrigPoly(acc)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        return self._combine([*self.terms.items(), *other.terms.items()])

    def __neg__(self):
        return TrigPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "TrigPoly":
        return TrigPoly({k: c * factor for k, c in self.terms.items()})

    def d_t(self) -> "TrigPoly":
        """``d/dt``: ``c^a s^b -> (b c^{a+1} s^{b-1} - a c^{a-1} s^{b+1}) / 2``."""
        half = Fraction(1, 2)
        pieces = []
        for (a, b), c in self.terms.items():
            if b:
                pieces.append(((a + 1, b - 1), c * (half * b)))
            if a:
                pieces.append(((a - 1, b + 1), c * (-half * a)))
        return self._combine(pieces)

    def times_tan(self) -> "TrigPoly":
        return TrigPoly({(a - 1, b + 1): c for (a, b), c in self.terms.items()})

    def times_cot(self) -> "TrigPoly":
        return TrigPoly({(a + 1, b - 1): c for (a, b), c in self.terms.items()})

    def is_polynomial(self) -> bool:
        return all(a >= 0 and b >= 0 for a, b in self.terms)

    @property
    def degree(self) -> int | None:
        degs = {a + b for a, b in self.terms}
        if len(degs) > 1:
            raise ValueError("trig polynomial is not homogeneous")
        return degs.pop() if degs else None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        c, s = np.cos(t / 2), np.sin(t / 2)
        out = np.zeros_like(t)
        for (a, b), coef in self.terms.items():
            out = out + float(coef) * c**a * s**b
        return out

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        body = " + ".join(f"({c})c^{a}s^{b}" for (a, b), c in self.terms.items())
        return f"TrigPoly({body or '0'})"


# ---------------------------------------------------------------------------
# harmonics


@dataclass(frozen=True, eq=False)
class Harmonic:
    """``(1/pi) radial(t) exp(i m1 alpha + i m2 beta)``."""

    label: HarmonicLabel
    radial: TrigPoly

    def radial_values(self, t) -> np.ndarray:
        return self.radial(t) / math.pi

    def values(self, t, alpha, beta) -> np.ndarray:
        phase = np.exp(1j * (self.label.m1 * np.asarray(alpha) + self.label.m2 * np.asarray(beta)))
        return self.radial_values(t) * phase

    def sample(self, grid: QuadratureGrid) -> np.ndarray:
        return self.values(*grid.mesh)

    def __eq__(self, other):
        if not isinstance(other, Harmonic):
            return NotImplemented
        return self.label == other.label and self.radial == other.radial

    def __hash__(self):
        return hash((self.label, tuple(self.radial.terms.items())))

    def to_dict(self) -> dict:
        lab = self.label
        return {
            "two_j": lab.two_j,
            "m1": lab.m1,
            "m2": lab.m2,
            "prefactor": "1/pi",
            "monomials": [
                {"a": a, "b": b, "coeff_rational": str(c.q), "coeff_radicand": c.r}
                for (a, b), c in self.radial.terms.items()
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Harmonic":
        lab = HarmonicLabel(d["two_j"], d["m1"], d["m2"])
        terms = {
            (m["a"], m["b"]): Surd(Fraction(m["coeff_rational"]), m["coeff_radicand"])
            for m in d["monomials"]
        }
        return cls(lab, TrigPoly(terms))


def highest_weight(two_j: int) -> Harmonic:
    """``(1/pi) sqrt((1+2j)/2) cos^{2j}(t/2) e^{2ij alpha}``, i.e. m_I = m_K = j."""
    if int(two_j) != two_j or two_j < 0:
        raise InvalidLabel("two_j must be a non-negative integer")
    two_j = int(two_j)
    coeff = Surd.sqrt(Fraction(1 + two_j, 2))
    return Harmonic(HarmonicLabel(two_j, two_j, 0), TrigPoly.monomial(two_j, 0, coeff))


def _ladder_norm(two_j: int, two_m: int) -> Surd:
    # lowering from m: sqrt((j + m)(j - m + 1))
    return Surd.sqrt(Fraction((two_j + two_m) * (two_j - two_m + 2), 4))


def _lower(h: Harmonic, kind: str) -> Harmonic:
    lab = h.label
    P = h.radial
    half_m1 = Fraction(lab.m1, 2)
    half_m2 = Fraction(lab.m2, 2)
    tan_part = P.times_tan().scale(-half_m1)
    if kind == "I":
        if lab.two_mI <= -lab.two_j:
            raise LadderBottom(f"m_I is already -j in {lab.ket()}")
        new = lab.from_weights(lab.two_j, lab.two_mI - 2, lab.two_mK)
        norm = _ladder_norm(lab.two_j, lab.two_mI)
        bracket = P.d_t() + tan_part + P.times_cot().scale(half_m2)
    else:
        if lab.two_mK <= -lab.two_j:
            raise LadderBottom(f"m_K is already -j in {lab.ket()}")
        new = lab.from_weights(lab.two_j, lab.two_mI, lab.two_mK - 2)
        norm = _ladder_norm(lab.two_j, lab.two_mK)
        bracket = P.d_t() + tan_part + P.times_cot().scale(-half_m2)
    if not bracket.is_polynomial():
        raise ArithmeticError(f"ladder step left a singular term: {bracket!r}")
    return Harmonic(new, bracket.scale(Surd(1) / norm))


def lower_I(h: Harmonic) -> Harmonic:
    """Apply ``I_-`` and divide by ``sqrt((j + m_I)(j - m_I + 1))``."""
    return _lower(h, "I")


def lower_K(h: Harmonic) -> Harmonic:
    """Apply ``K_-`` and divide by ``sqrt((j + m_K)(j - m_K + 1))``."""
    return _lower(h, "K")


@lru_cache(maxsize=None)
def generate(label: HarmonicLabel, order: str = "IK") -> Harmonic:
    """The harmonic ``|j m_I m_K>`` from ``(I_-)^{j-m_I} (K_-)^{j-m_K}`` on the seed.

    ``order`` selects whether all ``I_-`` steps (``"IK"``) or all ``K_-``
    steps (``"KI"``) are taken first; the result does not depend on it.
    """
    if not isinstance(label, HarmonicLabel):
        label = HarmonicLabel(*label)
    if order not in ("IK", "KI"):
        raise ValueError("order must be 'IK' or 'KI'")
    h = highest_weight(label.two_j)
    n_I = (label.two_j - label.two_mI) // 2
    n_K = (label.two_j - label.two_mK) // 2
    steps = "I" * n_I + "K" * n_K if order == "IK" else "K" * n_K + "I" * n_I
    for s in steps:
        h = _lower(h, s)
    return h


def eval_harmonic(h: Harmonic, p: AngleCoordS3) -> complex:
    return complex(h.values(p.t, p.alpha, p.beta))


def inner_product(h1, h2, grid: QuadratureGrid) -> complex:
    """``int conj(h1) h2 (sin t / 4) dt da db`` by quadrature.

    Arguments may be :class:`Harmonic` objects or sampled grid functions.
    """
    f1 = h1.sample(grid) if isinstance(h1, Harmonic) else np.asarray(h1)
    f2 = h2.sample(grid) if isinstance(h2, Harmonic) else np.asarray(h2)
    return complex(integrate(np.conj(f1) * f2, grid))


def gram_matrix(harmonics, grid: QuadratureGrid) -> np.ndarray:
    samples = np.stack([h.sample(grid).ravel() for h in harmonics])
    w = np.asarray(grid.volume_weights).ravel()
    return (np.conj(samples) * w) @ samples.T


# ---------------------------------------------------------------------------
# numerical generators on grid functions

_BASE = ("L1", "L2", "L3", "M1", "M2", "M3")


def _base_generators(f: np.ndarray, grid: QuadratureGrid, needed) -> dict:
    T, A, B = grid.mesh
    ft, fa, fb = d_t(f, grid), d_alpha(f, grid), d_beta(f, grid)
    tn, ct = np.tan(T / 2), 1.0 / np.tan(T / 2)
    ca, sa, cb, sb = np.cos(A), np.sin(A), np.cos(B), np.sin(B)
    forms = {
        "L1": lambda: 2 * sa * cb * ft - tn * ca * cb * fa - ct * sa * sb * fb,
        "L2": lambda: -2 * ca * cb * ft - tn * sa * cb * fa + ct * ca * sb * fb,
        "L3": lambda: fa,
        "M1": lambda: 2 * ca * sb * ft + tn * sa * sb * fa + ct * ca * cb * fb,
        "M2": lambda: 2 * sa * sb * ft - tn * ca * sb * fa + ct * sa * cb * fb,
        "M3": lambda: fb,
    }
    return {k: -1j * forms[k]() for k in needed}


def _combination(name: str) -> dict:
    """Express a generator as a linear combination of L1..L3, M1..M3."""
    if name in _BASE:
        return {name: 1.0}
    fam, rest = name[0], name[1:]
    if fam in "LM" and rest in ("+", "-"):
        sign = 1 if rest == "+" else -1
        return {f"{fam}1": 1.0, f"{fam}2": sign * 1j}
    if fam in "IK":
        sm = 0.5 if fam == "I" else -0.5
        if rest in ("1", "2", "3"):
            return {f"L{rest}": 0.5, f"M{rest}": sm}
        if rest in ("+", "-"):
            sign = 1 if rest == "+" else -1
            return {"L1": 0.5, "M1": sm, "L2": 0.5 * sign * 1j, "M2": sm * sign * 1j}
    raise ValueError(f"unknown generator {name!r}")


GENERATORS = (
    *_BASE, "L+", "L-", "M+", "M-",
    "I1", "I2", "I3", "K1", "K2", "K3", "I+", "I-", "K+", "K-",
)


def apply_generator(name: str, f: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    """Apply an so(4) generator to a grid function.

    The ``alpha, beta`` derivatives are spectral and the ``t`` derivative
    uses Gauss-Legendre collocation.
    """
    name = name.replace("±", "+").replace("∓", "-")
    combo = _combination(name)
    base = _base_generators(np.asarray(f, dtype=complex), grid, combo)
    out = np.zeros(grid.shape, dtype=complex)
    for k, c in combo.items():
        out += c * base[k]
    return out


def casimir_apply(f: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    """``(L^2 + M^2) f`` as a sum of squared generators."""
    out = np.zeros(grid.shape, dtype=complex)
    for g in _BASE:
        out += apply_generator(g, apply_generator(g, f, grid), grid)
    return out


def l_dot_m_apply(f: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    out = np.zeros(grid.shape, dtype=complex)
    for k in "123":
        out += apply_generator(f"L{k}", apply_generator(f"M{k}", f, grid), grid)
    return out
