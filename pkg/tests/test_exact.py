from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from selmer_orbits.exact import (
    Poly,
    charpoly,
    charpoly_pencil,
    det_bareiss,
    det_cofactor,
    discriminant,
    hermite_normal_form,
    hnf_rows,
    is_squarefree,
    isolate_real_roots,
    lattice_from_generators,
    resultant,
    sign_at_root,
    solve_rational,
    standard_form,
    sturm_real_root_count,
    sylvester_matrix,
    LatticeBasis,
)

x = sympy.Symbol("x")
small = st.integers(-9, 9)


def to_sympy(f: Poly):
    return sum(sympy.Rational(c.numerator, c.denominator) * x ** i if isinstance(c, Fraction) else c * x ** i
               for i, c in enumerate(f.coeffs))


coeff_lists = st.lists(small, min_size=2, max_size=6)


def test_odd_model_layout():
    f = Poly.odd_model([2, 3])
    assert f.coeffs == (3, 2, 0, 1)
    assert f.is_monic() and f.degree == 3
    assert f(2) == 8 + 4 + 3


def test_from_roots_and_eval():
    f = Poly.from_roots([1, -2, 3])
    assert [f(r) for r in (1, -2, 3)] == [0, 0, 0]
    assert f.degree == 3


@given(coeff_lists, coeff_lists)
def test_divmod_reconstructs(a, b):
    A, B = Poly(a), Poly(b)
    if B.is_zero():
        return
    q, r = A.divmod(B)
    assert q * B + r == A
    assert r.is_zero() or r.degree < B.degree


@given(st.lists(small, min_size=2, max_size=6))
def test_discriminant_matches_sympy(c):
    f = Poly.odd_model(c)
    assert discriminant(f) == sympy.discriminant(to_sympy(f), x)


@given(coeff_lists, coeff_lists)
def test_resultant_is_sylvester_determinant(a, b):
    f, g = Poly(a), Poly(b)
    if f.is_zero() or g.is_zero() or f.degree < 1 or g.degree < 1:
        return
    assert resultant(f, g) == sympy.Matrix(sylvester_matrix(f, g)).det()


def test_resultant_product_of_values():
    # Res(f, g) = lc(f)^deg g * prod g(root of f)
    f = Poly.from_roots([1, -2, 3])
    g = Poly([5, 0, 1])
    assert resultant(f, g) == g(1) * g(-2) * g(3)
    assert resultant(Poly([1, 1]), Poly([0, 0, 0, 1])) == -1


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_cofactor(m):
    assert det_bareiss(m) == det_cofactor(m) == sympy.Matrix(m).det()


@given(st.lists(small, min_size=2, max_size=6))
def test_sturm_count_matches_sympy(c):
    f = Poly.odd_model(c)
    if not is_squarefree(f):
        return
    assert sturm_real_root_count(f) == len(sympy.real_roots(to_sympy(f)))


@given(st.lists(small, min_size=2, max_size=4))
def test_isolating_intervals_bracket_sign_changes(c):
    f = Poly.odd_model(c)
    if not is_squarefree(f):
        return
    ivs = isolate_real_roots(f)
    assert len(ivs) == sturm_real_root_count(f)
    for lo, hi in ivs:
        assert lo <= hi
        if lo < hi:
            assert f(lo) * f(hi) <= 0
    # each numerically computed root sits in exactly one interval
    for r in sympy.Poly(list(reversed(f.coeffs)), x).nroots(n=30):
        if abs(sympy.im(r)) > 1e-20:
            continue
        r = float(sympy.re(r))
        assert sum(1 for lo, hi in ivs if float(lo) < r <= float(hi) + 1e-12) == 1


def test_sign_at_root_known():
    f = Poly.from_roots([-2, 1, 3])  # roots known exactly
    ivs = isolate_real_roots(f)
    g = Poly([-2, 1])  # x - 2
    assert [sign_at_root(g, f, iv) for iv in ivs] == [-1, -1, 1]


def test_charpoly_pencil_standard_form():
    n = 1
    A = standard_form(n)
    assert A == [[int(i + j == 2) for j in range(3)] for i in range(3)]
    # B = A * M with M companion-like; charpoly recovers (-1)^n det(xA - B)
    B = [[0, 1, 0], [1, 0, 0], [0, 0, -1]]
    f = charpoly_pencil(B, n)
    X = sympy.Matrix(A) * x - sympy.Matrix(B)
    assert sympy.expand(to_sympy(f) - (-1) ** n * X.det()) == 0
    assert f == Poly.odd_model([0, 1])


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_charpoly_matches_sympy(m):
    assert sympy.expand(to_sympy(charpoly(m)) - sympy.Matrix(m).charpoly(x).as_expr()) == 0


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=5))
def test_hnf_same_lattice(rows):
    H = hnf_rows(rows)
    M = sympy.Matrix(rows)
    assert len(H) == M.rank()
    for i, r in enumerate(H):
        piv = next(j for j, v in enumerate(r) if v)
        assert r[piv] > 0
        for k in range(i):
            assert 0 <= H[k][piv] < r[piv]
    # every input row is an integer combination of H and vice versa
    for r in rows:
        sol = sympy.Matrix(H).T.gauss_jordan_solve(sympy.Matrix(r))[0] if H else None
        if H:
            assert all(v.is_integer for v in sol)


def test_lattice_index_and_hnf():
    L = lattice_from_generators([[2, 0, 0], [0, 3, 0], [1, 1, 1], [0, 0, 6]], 3)
    H = hermite_normal_form(L)
    assert H.index() == abs(sympy.Matrix(H.basis).det())
    half = LatticeBasis.from_rows([[1, 0], [0, 1]], denominator=2)
    assert half.index() == Fraction(1, 4)


def test_solve_rational():
    M = [[2, 1], [1, 3]]
    sol = solve_rational(M, [1, 2])
    assert sol == [Fraction(1, 5), Fraction(3, 5)]
