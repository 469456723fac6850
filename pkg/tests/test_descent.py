import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from selmer_orbits.algebra import MonogenicAlgebra
from selmer_orbits.curves import HyperCurve
from selmer_orbits.descent import (
    delta_class,
    divisor_certificate,
    ideal_from_divisor,
    integral_orbit_zp,
    invariants_mod,
    local_ideal_census,
    mumford_from_points,
    parse_points,
)
from selmer_orbits.errors import Unsupported, ValidationError
from selmer_orbits.exact import Poly
from selmer_orbits.harness import synthetic_descent_inputs
from selmer_orbits.orbit_rep import reducibility_block_tests
from selmer_orbits.padic import vp


def test_parse_points():
    assert parse_points("(2,3), (-1, 0)") == [(2, 3), (-1, 0)]
    assert parse_points("(1/2,3)") == [(Fraction(1, 2), 3)]
    assert parse_points("") == []
    with pytest.raises(ValidationError):
        parse_points("(2,3")


def test_mumford_interpolation():
    C = HyperCurve(2, (0, 0, 0, 1))  # y^2 = x^5 + 1
    D = mumford_from_points([(0, 1)], C.f)
    assert D.check(C.f) and D.m == 1
    C1 = HyperCurve(1, (0, 1))  # y^2 = x^3 + 1
    C2 = HyperCurve(2, (0, 0, -1, 1))  # y^2 = x^5 - x + 1
    D = mumford_from_points([(0, 1), (1, -1)], C2.f)
    assert D.P == Poly.from_roots([0, 1]) and D.R(0) == 1 and D.R(1) == -1
    assert D.check(C2.f)
    with pytest.raises(Unsupported):
        mumford_from_points([(-1, 0)], C1.f)  # Weierstrass point
    with pytest.raises(ValidationError):
        mumford_from_points([(2, 4)], C1.f)
    with pytest.raises(ValidationError):
        mumford_from_points([(0, 1), (2, 3), (-1, 0)], C1.f)


def test_single_point_certificate():
    C = HyperCurve(1, (0, 1))
    cert = divisor_certificate(C, [(2, 3)])
    for key in ("unimodular", "symmetric", "containment", "trace_zero", "charpoly_ok",
                "norm_matches_points", "ok"):
        assert cert[key], key
    D = mumford_from_points([(2, 3)], C.f)
    I = ideal_from_divisor(D, C.f)
    assert [list(r) for r in I.lattice.basis] == [[1, 0, 2], [0, 1, 1], [0, 0, 3]]
    assert I.norm == 3
    assert I.is_beta_stable()
    a = delta_class(D, C.f)
    assert a.norm == 9 and a.norm_is_square()


@given(st.integers(0, 10 ** 6))
def test_synthetic_inputs_certify(seed):
    for item in synthetic_descent_inputs(3, seed=seed):
        C = HyperCurve.from_coeffs(item["c"])
        cert = divisor_certificate(C, item["points"])
        assert cert["ok"], (item, cert)
        b_prod = 1
        for _, b in item["points"]:
            b_prod *= b
        D = mumford_from_points(item["points"], C.f)
        assert ideal_from_divisor(D, C.f).norm == abs(b_prod)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_integral_orbit_reproduces_invariants(p):
    for item in synthetic_descent_inputs(8, seed=p):
        C = HyperCurve.from_coeffs(item["c"])
        D = mumford_from_points(item["points"], C.f)
        B = integral_orbit_zp(C, D, p, 6)
        assert invariants_mod(B) == tuple(x % p ** 6 for x in C.c)


def test_integral_orbit_rejects_p2():
    C = HyperCurve(1, (0, 1))
    D = mumford_from_points([(2, 3)], C.f)
    with pytest.raises(Unsupported):
        integral_orbit_zp(C, D, 2, 6)


def test_trivial_divisor_gives_distinguished_shape():
    C = HyperCurve(1, (2, 3))
    D = mumford_from_points([], C.f)
    B = integral_orbit_zp(C, D, 5, 4)
    assert reducibility_block_tests(B)["distinguished_shape"]


# --- brute-force oracle for the local ideal census --------------------------

def _in_lattice(v, H):
    v = list(v)
    for i, r in enumerate(H):
        if v[i] % r[i]:
            return False
        c = v[i] // r[i]
        v = [a - c * b for a, b in zip(v, r)]
    return all(x == 0 for x in v)


def brute_census(f: Poly, alpha: Poly, p: int, e: int, t: int):
    L = MonogenicAlgebra(f)
    d = f.degree
    Nbot = 2 * e + t
    target = t + e * d
    ainv = L.inv(alpha)
    found = []
    for a in itertools.product(range(Nbot + 1), repeat=d):
        if sum(a) != target:
            continue
        piv = [p ** x for x in a]
        slots = [(i, j) for i in range(d) for j in range(i + 1, d)]
        for vals in itertools.product(*[range(piv[j]) for _, j in slots]):
            H = [[0] * d for _ in range(d)]
            for i in range(d):
                H[i][i] = piv[i]
            for (i, j), v in zip(slots, vals):
                H[i][j] = v
            if not all(_in_lattice([p ** Nbot * int(i == j) for j in range(d)], H) for i in range(d)):
                continue
            stable = all(_in_lattice([int(x) for x in L.coords(L.mul(Poly(r), Poly.x()))], H) for r in H)
            if not stable:
                continue
            sq_ok = all(
                all(vp(Fraction(c) / p ** (2 * e), p) >= 0
                    for c in L.mul(ainv, L.mul(Poly(H[i]), Poly(H[j]))).coeffs)
                for i in range(d) for j in range(i, d))
            if sq_ok:
                found.append(tuple(tuple(r) for r in H))
    return sorted(found)


@pytest.mark.parametrize("c,points,p,e", [
    ((0, 1), "(2,3)", 3, None),
    ((0, 1), "(0,1)", 3, None),
    ((0, 1), "(2,3)", 5, None),
    ((-3, 6), "(1,2)", 3, None),
    ((0, 9), "(0,3)", 3, 1),  # same truncated search space on both sides
    ((0, 1), "(2,3)", 3, 2),
])
def test_local_census_matches_brute_force(c, points, p, e):
    C = HyperCurve(1, c)
    D = mumford_from_points(parse_points(points), C.f)
    a = delta_class(D, C.f)
    res = local_ideal_census(C.f, a, p, e)
    if res["count"] == 0 and "t" not in res:
        return
    e, t = res["e"], res["t"]
    got = sorted(tuple(tuple(int(Fraction(x) * p ** e) for x in r) for r in I["hnf"]) for I in res["ideals"])
    assert got == brute_census(C.f, a.alpha, p, e, t)
    assert res["count"] >= 1


def test_local_census_stabilizers():
    C = HyperCurve(1, (0, 1))
    a = delta_class(mumford_from_points([(2, 3)], C.f), C.f)
    res = local_ideal_census(C.f, a, 3)
    assert res["count"] == 1 and res["ideals"][0]["stabilizer"] == 2
    one = delta_class(mumford_from_points([], C.f), C.f)
    res = local_ideal_census(C.f, one, 3)
    assert res["count"] == 2
    assert local_ideal_census(C.f, one, 5)["count"] == 1
