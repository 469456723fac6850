"""Worked examples with independently derived answers, frozen as regressions."""

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from selmer_orbits import finite_orbits as fo
from selmer_orbits import fp
from selmer_orbits import padic
from selmer_orbits.algebra import MonogenicAlgebra
from selmer_orbits.curves import (
    HyperCurve,
    curve_height,
    enumerate_curves,
    height_below,
    mod3_chabauty_filter,
    normalize_indivisible,
)
from selmer_orbits.descent import (
    AlphaClass,
    IdealLattice,
    delta_class,
    divisor_certificate,
    gram_pair,
    ideal_from_divisor,
    integral_orbit_zp,
    invariants_mod,
    local_ideal_census,
    mumford_from_points,
)
from selmer_orbits.exact import (
    LatticeBasis,
    Poly,
    charpoly,
    det_bareiss,
    discriminant,
    hermite_normal_form,
    lattice_from_generators,
    mat_mul,
    standard_form,
    sturm_real_root_count,
    sylvester_matrix,
)
from selmer_orbits.harness import ExperimentConfig, run
from selmer_orbits.orbit_rep import (
    OperatorRep,
    SignPattern,
    act,
    classify_component,
    combinatorial_lemma_check,
    distinguished_rep,
    invariants,
    nilpotent_subregular,
    real_component,
    root_element,
    torus_element,
    weight_identities,
)


# --- exact algebra -----------------------------------------------------------

def test_quintic_discriminant_against_sylvester():
    f = Poly([1, 1, 0, 0, 0, 1])  # x^5 + x + 1
    S = sylvester_matrix(f, f.derivative())
    # disc = (-1)^(d(d-1)/2) Res(f, f') / lc(f), d = 5 gives sign +1
    assert discriminant(f) == det_bareiss(S) == 5 ** 5 + 4 ** 4  # 5^5 b^4 + 4^4 a^5


def test_sturm_against_bisection():
    f = Poly([-1, 2, 0, -4, 0, 1])  # x^5 - 4x^3 + 2x - 1, with the root x = -1
    # bisection oracle: sign changes between nonzero values on a fine grid
    # over [-6, 6], which contains every root (Cauchy bound 5); the grid root
    # x = -1 is simple, so it also shows up as one sign change
    grid = [Fraction(k, 256) for k in range(-6 * 256, 6 * 256 + 1)]
    nz = [v for v in (f(x) for x in grid) if v != 0]
    changes = sum(1 for a, b in zip(nz, nz[1:]) if a * b < 0)
    assert f(-1) == 0
    assert sturm_real_root_count(f) == changes == 3


def test_hnf_invariant_under_unimodular_transforms():
    rng = random.Random(5)
    base = [[2, 1, 0], [0, 3, 1], [1, 0, 4]]
    ref = hermite_normal_form(LatticeBasis.from_rows(base)).basis
    for _ in range(30):
        U = [[int(i == j) for j in range(3)] for i in range(3)]
        for _ in range(5):
            i, j = rng.sample(range(3), 2)
            k = rng.randint(-3, 3)
            U[i] = [a + k * b for a, b in zip(U[i], U[j])]
        assert abs(det_bareiss(U)) == 1
        rows = mat_mul(U, base)
        assert hermite_normal_form(LatticeBasis.from_rows(rows)).basis == ref


def test_x3_plus_1_matrix():
    B = OperatorRep(1, [[0, 1, 0], [1, 0, 0], [0, 0, -1]])
    assert invariants(B) == (0, 1)


# --- curves ------------------------------------------------------------------

def test_normalize_examples():
    assert normalize_indivisible((16, 64)) == ((1, 1), 2)
    assert normalize_indivisible((4, 8)) == ((4, 8), 1)


def test_unit_coefficients_height():
    C = HyperCurve(2, (1, 1, 1, 1))
    assert curve_height(C) == 1
    assert height_below(C, 2) and not height_below(C, 1)


def test_discriminant_example():
    assert HyperCurve(1, (-1, 0)).disc == 64


def test_tiny_enumeration():
    got = [C.c for C in enumerate_curves(1, 2)]
    assert got == [c for c in itertools.product((-1, 0, 1), repeat=2) if c != (0, 0)]
    assert run(ExperimentConfig(subcommand="enumerate", X=2)).counts["curves"] == 8


def test_mod3_filter_examples():
    C = HyperCurve(1, (2, 2))
    assert C.disc == 16 * -140 and mod3_chabauty_filter(C)
    for C in enumerate_curves(2, 200):
        if mod3_chabauty_filter(C):
            assert all(C.f(x) % 3 == 2 for x in range(3))


def test_good_reduction_at_7_rate():
    rep = run(ExperimentConfig(subcommand="enumerate", X=10 ** 4))
    assert rep.checks["good_reduction_7_within_0.02"]


# --- orbit representatives -----------------------------------------------------

def test_x3_plus_1_distinguished():
    assert distinguished_rep(Poly.odd_model([0, 1])).matrix() == [[0, 1, 0], [1, 0, 0], [0, 0, -1]]


def test_x3_minus_x_distinguished():
    B = distinguished_rep(Poly.odd_model([-1, 0]))
    assert B.B[0][0] == 0 and invariants(B) == (-1, 0)


def test_subregular_square_classes():
    """Absence of a conjugating element in a bounded search; the same search
    finds one when the scalars differ by a square."""
    n = 1
    E1 = nilpotent_subregular(n, 1).matrix()
    E2 = nilpotent_subregular(n, 2).matrix()
    E4 = nilpotent_subregular(n, 4).matrix()
    gens = [root_element(n, i, j, c) for i in range(3) for j in range(3)
            if i != j and i + j != 2 for c in (-2, -1, 1, 2)]
    gens += [torus_element(n, [Fraction(t)]) for t in (2, -2, Fraction(1, 2), Fraction(-1, 2), -1)]
    words = [g for g in gens] + [mat_mul(a, b) for a in gens for b in gens]

    def conj(X):
        return {tuple(map(tuple, act(g, X))) for g in words}

    assert tuple(map(tuple, E2)) not in conj(E1)
    assert tuple(map(tuple, E4)) in conj(E1)


def test_zero_block_forces_discriminant_zero():
    rng = random.Random(11)
    for _ in range(100):
        b = [[0] * 3 for _ in range(3)]
        for i, j in [(0, 2), (1, 1), (1, 2), (2, 2)]:
            b[i][j] = b[j][i] = rng.randint(-9, 9)
        b[1][1] = -2 * b[0][2]
        B = OperatorRep(1, b)
        assert discriminant(Poly.odd_model(list(invariants(B)))) == 0


def test_weight_identities_up_to_6():
    assert all(weight_identities(n)["ok"] for n in range(1, 7))


def test_lemma_small_cases():
    r1 = combinatorial_lemma_check(1)
    assert r1["U_minus"] == [(1, 1)] and r1["num_subsets"] == 2 and r1["ok"]
    r2 = combinatorial_lemma_check(2)
    assert len(r2["U_minus"]) == 4 and r2["num_subsets"] == 16 and r2["ok"]


def test_real_component_examples():
    assert real_component(Poly.odd_model([-1, 0])) == 1
    assert real_component(Poly.odd_model([0, 1])) == 0
    assert real_component(Poly.from_roots([0, 1, -1, 2, -2])) == 2
    assert classify_component(SignPattern.parse("−++")) == (1, 3)


# --- finite fields ----------------------------------------------------------------

def test_census_examples():
    for c in fo.separable_polys(1, 3):
        if fp.num_irreducible_factors(fo.trace_zero_poly(c, 3), 3) == 1:
            cen = fo.census_fixed_poly(1, 3, c)
            assert cen.orbit_sizes == [24] and cen.stabilizer_orders == [1]
    cen = fo.census_fixed_poly(1, 5, (0, 1))
    assert cen.total == 120 and sorted(cen.orbit_sizes) == [60, 60]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_bfs_orbits_match_full_group_action(p):
    n = 1
    group = fo.enumerate_group(n, p)
    gens = fo.so_generators(n, p)
    for c in fo.separable_polys(n, p)[:6]:
        codes = set(fo.fiber_codes(n, p, c).tolist())
        sizes = []
        while codes:
            start = min(codes)
            B = fo.decode(np.array([start]), n, p)[0]
            orbit = {int(fo.encode(((g.T @ B @ g) % p)[None], n, p)[0]) for g in group}
            assert orbit <= codes
            codes -= orbit
            sizes.append(len(orbit))
            assert len(fo.orbit_codes(start, n, p, gens)) == len(orbit)
        assert sorted(sizes) == sorted(fo.census_fixed_poly(n, p, c).orbit_sizes)


def test_separable_count_p5():
    bad = sum(1 for c2, c3 in itertools.product(range(5), repeat=2) if (-4 * c2 ** 3 - 27 * c3 ** 2) % 5 == 0)
    assert len(fo.separable_polys(1, 5)) == 25 - bad == 20


def test_reducible_density_regressions():
    assert fo.reducible_poly_density(1, 13) == (100, 156)
    red, tot = fo.reducible_poly_density(2, 3)
    assert (red, tot) == (38, 54)
    assert abs(Fraction(red, tot) - Fraction(4, 5)) <= Fraction(10, 3)


# --- p-adic ---------------------------------------------------------------------

def test_newton_polygon_examples():
    for c in ([3, 3], [9, 3]):
        NP = padic.newton_polygon(Poly.odd_model(c), 3)
        assert NP.vertices == ((0, 1), (3, 0))
        assert NP.root_valuations() == [(Fraction(1, 3), 3)]


def test_local_orders_x3_plus_1():
    f = Poly.odd_model([0, 1])
    assert padic.factor_shape(f, 7).m == 2
    assert padic.factor_shape(f, 2).m == 1
    assert padic.j2_local_order(f, 7) == 4 and padic.jmod2j_local_order(f, 7, 1) == 4


def test_normalize_diag():
    G = [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
    U = padic.lattice_normalize_odd_p(G, 5, 6)
    T = [[sum(U[k][i] * G[k][l] * U[l][j] for k in range(3) for l in range(3)) % 5 ** 6
          for j in range(3)] for i in range(3)]
    assert T == standard_form(1)


def test_strassmann_spec_series():
    # F(z) = 3z + z^3/3: substituting z = 3t gives 9t + 9t^3, so N = 3
    assert padic.strassmann_zero_count([0, 3, 0, Fraction(1, 3)], 3) == 3
    # the only zero in 3Z_3 is 0 because 1 + t^2 has no root mod 3
    assert all((1 + t * t) % 3 for t in range(3))


def test_omega_expansion_x3_plus_1():
    ex = padic.omega_expansion(HyperCurve(1, (0, 1)), 0, 20)
    assert ex["a"][0] == 1
    assert all(ex["a"][k] == 0 for k in range(1, 21, 2))


def test_chabauty_archived():
    assert padic.chabauty_bound_at_3(HyperCurve(1, (2, 2)))["bound"] == 1


def test_local_mass_x3_plus_1():
    res = padic.local_mass_ratios(HyperCurve(1, (0, 1)), extra_primes=[7])
    rho = {k: v["rho"] for k, v in res["places"].items()}
    assert rho == {"inf": Fraction(1, 2), "2": 2, "3": 1, "7": 1}
    assert res["product"] == 1


# --- descent ----------------------------------------------------------------------

X3P1 = HyperCurve(1, (0, 1))


def test_two_point_divisor():
    D = mumford_from_points([(0, 1), (2, 3)], X3P1.f)
    assert D.P == Poly([0, -2, 1]) and D.R == Poly([1, 1])
    assert (D.R * D.R - X3P1.f) % D.P == Poly()
    a = delta_class(D, X3P1.f)
    assert a.alpha == Poly([0, -2, 1]) and a.norm == 9
    assert ideal_from_divisor(D, X3P1.f).norm == 3
    B = integral_orbit_zp(X3P1, D, 7, 6)
    assert invariants_mod(B) == (0, 1)


def test_one_point_divisor():
    D = mumford_from_points([(2, 3)], X3P1.f)
    a = delta_class(D, X3P1.f)
    assert a.alpha == Poly([2, -1]) and a.norm == 9
    assert ideal_from_divisor(D, X3P1.f).norm == 3
    gp = gram_pair(ideal_from_divisor(D, X3P1.f), a, X3P1.f)
    assert abs(gp.det_G()) == 1 and gp.symmetric_ok()
    assert charpoly([list(r) for r in gp.M]) == X3P1.f
    assert invariants_mod(integral_orbit_zp(X3P1, D, 5, 6)) == (0, 1)


def test_trivial_pair_is_split_form():
    I = IdealLattice(X3P1.f, LatticeBasis.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    gp = gram_pair(I, AlphaClass(Poly([1]), Fraction(1)), X3P1.f)
    assert [list(r) for r in gp.G] == standard_form(1)
    assert gp.symmetric_ok()


def test_scaled_pair_same_verdicts():
    f = X3P1.f
    L = MonogenicAlgebra(f)
    D = mumford_from_points([(2, 3)], f)
    I = ideal_from_divisor(D, f)
    a = delta_class(D, f)
    c = Poly.x()
    gens = [L.coords(L.mul(c, e)) for e in I.basis_elements]
    cI = IdealLattice(f, lattice_from_generators(gens, 3))
    c2a = L.mul(L.mul(c, c), a.alpha)
    ca = AlphaClass(c2a, Fraction(L.norm(c2a)))
    v1 = gram_pair(I, a, f).certificate(f)
    v2 = gram_pair(cI, ca, f).certificate(f)
    keys = ("unimodular", "symmetric", "containment", "trace_zero", "charpoly_ok")
    assert [v1[k] for k in keys] == [v2[k] for k in keys] == [True] * 5


def test_local_census_archived():
    a = delta_class(mumford_from_points([(2, 3)], X3P1.f), X3P1.f)
    res = local_ideal_census(X3P1.f, a, 3)
    assert res["count"] == 1 and res["mass"] == Fraction(1, 2)
    assert res["ideals"][0]["hnf"] == [["1", "0", "2"], ["0", "1", "1"], ["0", "0", "3"]]


def test_certificate_sample():
    cert = divisor_certificate(X3P1, [(2, 3)])
    assert cert["ok"]
