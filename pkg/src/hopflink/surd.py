"""Exact numbers of the form ``q * sqrt(r)``.

``q`` is a :class:`fractions.Fraction` and ``r`` a positive square-free
integer. Products and quotients stay in this set; sums are only defined when
the radicands agree (or one term is zero), which is all the ladder algebra
ever needs because every harmonic carries one common irrational factor.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=4096)
def _split_square(n: int) -> tuple[int, int]:
    """Write ``n = k**2 * r`` with ``r`` square-free; returns ``(k, r)``."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    k, r, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1 if p == 2 else 2
    return k, r * n


class Surd:
    __slots__ = ("q", "r")

    def __init__(self, q=0, r: int = 1):
        q = Fraction(q)
        r = int(r)
        if q == 0:
            r = 1
        else:
            k, r = _split_square(r)
            q *= k
        self.q = q
        self.r = r

    @classmethod
    def sqrt(cls, x) -> "Surd":
        """Exact square root of a non-negative rational."""
        x = Fraction(x)
        if x < 0:
            raise ValueError("square root of a negative number")
        if x == 0:
            return cls(0)
        # sqrt(p/d) = sqrt(p d) / d
        return cls(Fraction(1, x.denominator), x.numerator * x.denominator)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction)):
            return Surd(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.q == 0

    def square(self) -> Fraction:
        return self.q * self.q * self.r

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Surd(self.q * other.q, self.r * other.r)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by zero surd")
        return Surd(self.q / (other.q * other.r), self.r * other.r)

    def __neg__(self):
        return Surd(-self.q, self.r)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.r != other.r:
            raise ArithmeticError(f"cannot add surds with radicands {self.r} and {other.r}")
        return Surd(self.q + other.q, self.r)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.q == other.q and self.r == other.r

    def __hash__(self):
        return hash((self.q, self.r))

    def __float__(self):
        return float(self.q) * math.sqrt(self.r)

    def __repr__(self):
        return f"Surd({self.q!s}, {self.r})"

    def __str__(self):
        if self.r == 1:
            return str(self.q)
        return f"{self.q}*sqrt({self.r})"
