import sympy
from hypothesis import given, strategies as st

from selmer_orbits import fp

x = sympy.Symbol("x")
primes = st.sampled_from([2, 3, 5, 7, 11, 13])


def degrees_from_sympy(coeffs, p):
    poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
    out = []
    for g, e in poly.factor_list()[1]:
        out += [g.degree()] * e
    return sorted(out)


@given(st.lists(st.integers(0, 50), min_size=2, max_size=7), primes)
def test_factor_degrees_match_sympy(c, p):
    c = fp.trim(c, p)
    if fp.deg(c) < 1:
        return
    c = fp.monic(c, p)
    assert fp.factor_degrees(c, p) == degrees_from_sympy(c, p)


@given(st.lists(st.integers(0, 50), min_size=2, max_size=7), primes)
def test_factor_product_reconstructs(c, p):
    c = fp.trim(c, p)
    if fp.deg(c) < 1:
        return
    c = fp.monic(c, p)
    prod = [1]
    for g, e in fp.factor(c, p):
        for _ in range(e):
            prod = fp.mul(prod, g, p)
    assert fp.trim(prod, p) == c


@given(st.lists(st.integers(0, 50), min_size=2, max_size=6), primes)
def test_roots_by_exhaustion(c, p):
    c = fp.trim(c, p)
    if fp.deg(c) < 1:
        return
    assert fp.roots(c, p) == [r for r in range(p) if fp.evaluate(c, r, p) == 0]


def test_squarefree():
    assert fp.is_squarefree([1, 0, 1], 3)         # x^2 + 1
    assert not fp.is_squarefree([1, 2, 1], 5)     # (x + 1)^2
