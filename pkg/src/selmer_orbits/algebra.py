"""The monogenic algebra L = Q[x]/(f) with its power basis 1, beta, ..., beta^(d-1)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact import Poly, poly_xgcd, resultant


class MonogenicAlgebra:
    def __init__(self, f: Poly):
        if not f.is_monic() or f.degree < 1:
            raise ValueError("need a monic polynomial of positive degree")
        self.f = f
        self.d = f.degree

    # elements are Poly of degree < d ---------------------------------------
    def reduce(self, a: Poly) -> Poly:
        return a % self.f

    def elt(self, coords: Sequence) -> Poly:
        return Poly(coords)

    def coords(self, a: Poly) -> list:
        a = self.reduce(a)
        return [a[i] for i in range(self.d)]

    def mul(self, a: Poly, b: Poly) -> Poly:
        return (a * b) % self.f

    def beta_power(self, k: int) -> Poly:
        return (Poly.x() ** k) % self.f

    def inv(self, a: Poly) -> Poly:
        g, s, _ = poly_xgcd(a % self.f, self.f)
        if g.degree != 0:
            raise ZeroDivisionError("element is a zero divisor in L")
        return s % self.f

    def norm(self, a: Poly):
        """N_{L/Q}(a) = Res(f, a) for monic f."""
        a = self.reduce(a)
        if a.is_zero():
            return 0
        return resultant(self.f, a)

    def top_coeff(self, a: Poly):
        """Coefficient of beta^(d-1) of a (reduced)."""
        return self.reduce(a)[self.d - 1]

    def pairing(self, a: Poly, b: Poly, twist: Poly | None = None):
        """(a, b) = top coefficient of twist * a * b."""
        prod = self.mul(a, b)
        if twist is not None:
            prod = self.mul(prod, twist)
        return prod[self.d - 1]

    def mult_matrix(self, a: Poly) -> list[list]:
        """Matrix of multiplication by a on the power basis (columns = images)."""
        cols = [self.coords(self.mul(a, self.beta_power(j))) for j in range(self.d)]
        return [[cols[j][i] for j in range(self.d)] for i in range(self.d)]


def is_p_integral(x, p: int) -> bool:
    return Fraction(x).denominator % p != 0


def p_valuation(x, p: int) -> float | int:
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v
