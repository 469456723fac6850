"""From rational points to integral orbits: Mumford divisors, the coboundary
class alpha, the ideal I_D of Z[beta], the twisted trace-form Gram pair
(G, M), and its normalization over Z/p^k.  Also a local census of the pairs
(I, alpha) over Z_p."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import fp
from .algebra import MonogenicAlgebra
from .curves import HyperCurve
from .errors import Infeasible, Unsupported, ValidationError
from .exact import (
    LatticeBasis,
    Poly,
    charpoly,
    charpoly_pencil,
    coords_in_basis,
    det_bareiss,
    discriminant,
    hnf_rows,
    lattice_from_generators,
    mat_mul,
    mat_to_strings,
    mat_transpose,
)
from .orbit_rep import OperatorRep
from .padic import lattice_normalize_odd_p, vp


@dataclass(frozen=True)
class MumfordDivisor:
    P: Poly
    R: Poly
    points: tuple = ()

    @property
    def m(self) -> int:
        return self.P.degree

    def check(self, f: Poly) -> bool:
        return ((self.R * self.R - f) % self.P).is_zero()


def parse_points(text: str) -> list[tuple[Fraction, Fraction]]:
    """'(2,3)' or '(0,1),(2,3)' or '(1/2,-3/8)' -> list of pairs."""
    text = text.strip()
    if not text:
        return []
    pairs = re.findall(r"\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)", text)
    if not pairs or re.sub(r"\(\s*[^,()]+?\s*,\s*[^,()]+?\s*\)", "", text).strip(" ,;"):
        raise ValidationError(f"cannot parse points: {text!r}")
    try:
        return [(Fraction(a), Fraction(b)) for a, b in pairs]
    except ValueError as exc:
        raise ValidationError(f"cannot parse points: {text!r}") from exc


def _norm(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def mumford_from_points(points: Sequence[tuple], f: Poly) -> MumfordDivisor:
    """P = prod (x - a_i), R the interpolant with R(a_i) = b_i.

    Up to 2n points are accepted, so deg P < deg f; with more than n points
    the pair is not reduced but still defines the same divisor class data.
    """
    d = f.degree
    pts = [(Fraction(a), Fraction(b)) for a, b in points]
    if len(pts) >= d:
        raise ValidationError(f"at most {d - 1} points")
    xs = [a for a, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValidationError("repeated x-coordinate")
    for a, b in pts:
        if b * b != f(a):
            raise ValidationError(f"point ({a}, {b}) is not on the curve")
        if b == 0:
            raise Unsupported("Weierstrass points (b = 0) are not supported")
    if not pts:
        return MumfordDivisor(Poly([1]), Poly(), ())
    P = Poly.from_roots(xs)
    R = Poly()
    for i, (a, b) in enumerate(pts):
        li = Poly([1])
        for j, (c, _) in enumerate(pts):
            if j != i:
                li = li * Poly([-c, 1]) * (1 / (a - c))
        R = R + li * b
    D = MumfordDivisor(P, R, tuple((_norm(a), _norm(b)) for a, b in pts))
    if not D.check(f):
        raise AssertionError("R^2 - f is not divisible by P")
    return D


@dataclass(frozen=True)
class AlphaClass:
    alpha: Poly
    norm: Fraction

    def norm_is_square(self) -> bool:
        x = Fraction(self.norm)
        if x <= 0:
            return False
        from math import isqrt
        return all(isqrt(v) ** 2 == v for v in (x.numerator, x.denominator))


def delta_class(D: MumfordDivisor, f: Poly) -> AlphaClass:
    """alpha = (-1)^m P(beta) = prod (a_i - beta), with N(alpha) = prod f(a_i)."""
    L = MonogenicAlgebra(f)
    alpha = L.reduce(D.P.compose(Poly.x()) * ((-1) ** D.m))
    N = Fraction(L.norm(alpha))
    expected = Fraction(1)
    for a, _ in D.points:
        expected *= f(Fraction(a))
    if D.points and N != expected:
        raise AssertionError("norm of alpha disagrees with prod f(a_i)")
    cls = AlphaClass(alpha, N)
    if not cls.norm_is_square():
        raise AssertionError("N(alpha) is not a square")
    return cls


@dataclass(frozen=True)
class IdealLattice:
    """Z-lattice in Z[beta] (power-basis coordinates) stable under beta."""

    f: Poly
    lattice: LatticeBasis

    @property
    def basis_elements(self) -> list[Poly]:
        return [Poly([Fraction(x, self.lattice.denominator) for x in r]) for r in self.lattice.basis]

    @property
    def norm(self) -> Fraction:
        return self.lattice.index()

    def is_beta_stable(self) -> bool:
        L = MonogenicAlgebra(self.f)
        rows = self.lattice.rational_rows()
        for e in self.basis_elements:
            y = coords_in_basis(rows, L.coords(L.mul(Poly.x(), e)))
            if any(Fraction(c).denominator != 1 for c in y):
                return False
        return True


def ideal_from_divisor(D: MumfordDivisor, f: Poly) -> IdealLattice:
    """The Z[beta]-module generated by P(beta) and R(beta)."""
    if not D.R.is_integral():
        raise Unsupported("non-integral Mumford R is not supported")
    L = MonogenicAlgebra(f)
    gens = []
    for j in range(f.degree):
        bj = L.beta_power(j)
        gens.append(L.coords(L.mul(bj, D.P)))
        gens.append(L.coords(L.mul(bj, D.R)))
    I = IdealLattice(f, lattice_from_generators(gens, f.degree))
    if not I.is_beta_stable():
        raise AssertionError("ideal is not stable under beta")
    return I


@dataclass(frozen=True)
class GramPair:
    G: tuple
    M: tuple
    norm_ideal: Fraction
    norm_alpha: Fraction
    containment: bool

    @property
    def B(self):
        return mat_mul([list(r) for r in self.G], [list(r) for r in self.M])

    def det_G(self):
        return det_bareiss([list(r) for r in self.G])

    def unimodular(self) -> bool:
        return abs(self.det_G()) == 1

    def symmetric_ok(self) -> bool:
        B = self.B
        G = self.G
        d = len(G)
        return all(G[i][j] == G[j][i] and B[i][j] == B[j][i] for i in range(d) for j in range(d))

    def certificate(self, f: Poly) -> dict:
        M = [list(r) for r in self.M]
        return {
            "gram": mat_to_strings(self.G),
            "mult": mat_to_strings(self.M),
            "norm_ideal": str(self.norm_ideal),
            "norm_alpha": str(self.norm_alpha),
            "unimodular": self.unimodular(),
            "symmetric": self.symmetric_ok(),
            "containment": self.containment,
            "trace_zero": sum(M[i][i] for i in range(len(M))) == 0,
            "charpoly_ok": charpoly(M) == f,
        }


def gram_pair(I: IdealLattice, alpha: AlphaClass, f: Poly) -> GramPair:
    """G_ij = top coefficient of alpha^-1 e_i e_j, M = beta on the basis e."""
    L = MonogenicAlgebra(f)
    ainv = L.inv(alpha.alpha)
    es = I.basis_elements
    rows = I.lattice.rational_rows()
    d = f.degree
    containment = True
    G = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            q = L.mul(ainv, L.mul(es[i], es[j]))
            if not q.is_integral():
                containment = False
            G[i][j] = G[j][i] = _norm(L.top_coeff(q))
    if not containment:
        raise ValidationError("I^2 is not contained in alpha R")
    Mcols = [coords_in_basis(rows, L.coords(L.mul(Poly.x(), e))) for e in es]
    M = [[_norm(Mcols[j][i]) for j in range(d)] for i in range(d)]
    nI, nA = I.norm, Fraction(alpha.norm)
    if nI * nI != abs(nA):
        raise ValidationError(f"norm condition fails: N(I)^2 = {nI * nI}, N(alpha) = {nA}")
    if any(Fraction(x).denominator != 1 for r in G for x in r):
        raise AssertionError("Gram matrix is not integral")
    return GramPair(tuple(map(tuple, G)), tuple(map(tuple, M)), nI, nA, containment)


def divisor_certificate(C: HyperCurve, points: Sequence[tuple]) -> dict:
    """The full (I_D, delta(D)) certificate for a list of points."""
    f = C.f
    D = mumford_from_points(points, f)
    a = delta_class(D, f)
    I = ideal_from_divisor(D, f)
    gp = gram_pair(I, a, f)
    cert = gp.certificate(f)
    prod_b = Fraction(1)
    for _, b in D.points:
        prod_b *= Fraction(b)
    cert["norm_matches_points"] = I.norm == abs(prod_b)
    cert["ok"] = all(cert[k] for k in ("unimodular", "symmetric", "containment", "trace_zero",
                                        "charpoly_ok", "norm_matches_points"))
    return cert


def integral_orbit_zp(C: HyperCurve, D: MumfordDivisor, p: int, k: int) -> OperatorRep:
    """B = U^T (G M) U mod p^k, where U^T G U = A: the integral orbit of the
    pair (I_D, delta(D)) over Z/p^k."""
    if p == 2:
        raise Unsupported("integral orbits over Z_2 are not constructed")
    f = C.f
    gp = gram_pair(ideal_from_divisor(D, f), delta_class(D, f), f)
    mod = p ** k
    G = [[int(x) for x in r] for r in gp.G]
    U = lattice_normalize_odd_p(G, p, k)
    GM = [[int(x) for x in r] for r in gp.B]
    B = mat_mul(mat_mul(mat_transpose(U), GM), U)
    B = [[x % mod for x in r] for r in B]
    return OperatorRep(C.n, B, modulus=mod)


def invariants_mod(B: OperatorRep) -> tuple[int, ...]:
    f = charpoly_pencil(B.matrix(), B.n)
    d = 2 * B.n + 1
    return tuple(int(f[d - k]) % B.modulus for k in range(2, d + 1))


# ---------------------------------------------------------------------------
# local census of pairs (I, alpha) over Z_p

def _rref_mod_p(rows, p) -> tuple:
    a = [[int(x) % p for x in r] for r in rows]
    ncols = len(a[0]) if a else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                t = a[i][c]
                a[i] = [(x - t * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return tuple(tuple(row) for row in a[:r])


def invariant_subspaces(T, p: int) -> list[tuple]:
    """All T-invariant subspaces of F_p^d (as RREF row tuples), including 0 and F_p^d."""
    d = len(T)
    Tm = np.array(T, dtype=np.int64) % p

    def closure(vectors):
        rows = [list(v) for v in vectors]
        basis = _rref_mod_p(rows, p) if rows else ()
        while True:
            imgs = [list((Tm @ np.array(v)) % p) for v in basis]
            new = _rref_mod_p(list(basis) + imgs, p) if basis else ()
            if new == basis:
                return basis
            basis = new

    cyclic = set()
    for v in itertools.product(range(p), repeat=d):
        if any(v):
            cyclic.add(closure([v]))
    subs = {()} | cyclic
    frontier = set(cyclic)
    while frontier:
        nxt = set()
        for W in frontier:
            for Z in cyclic:
                S = _rref_mod_p(list(W) + list(Z), p)
                if S not in subs:
                    nxt.add(S)
        subs |= nxt
        frontier = nxt
    return sorted(subs, key=lambda s: (len(s), s))


def _mult_on_basis(L: MonogenicAlgebra, basis_rows, x: Poly):
    """Matrix of multiplication by x in the lattice basis (columns = images)."""
    cols = []
    for r in basis_rows:
        e = Poly(r)
        cols.append(coords_in_basis(basis_rows, L.coords(L.mul(x, e))))
    d = len(basis_rows)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _primary_blocks(mats, p: int) -> list[int]:
    """Dimensions of the joint generalized eigenspaces (local factors) of a
    commuting family of matrices mod p."""
    d = len(mats[0])
    blocks = [np.eye(d, dtype=np.int64)]  # each block: columns spanning it
    for M in mats:
        Mm = np.array(M, dtype=np.int64) % p
        new_blocks = []
        for Bk in blocks:
            k = Bk.shape[1]
            # restriction of M to the block: solve Bk X = M Bk
            img = (Mm @ Bk) % p
            X = _solve_cols_mod_p(Bk, img, p)
            cp = _charpoly_mod_p(X, p)
            for phi, e in fp.factor(cp, p):
                # kernel of phi(X)^k on the block
                Ph = _poly_at_matrix(phi, X, p)
                Pk = np.eye(k, dtype=np.int64)
                for _ in range(k):
                    Pk = (Pk @ Ph) % p
                ker = _kernel_mod_p(Pk, p)
                if ker.shape[1]:
                    new_blocks.append((Bk @ ker) % p)
        blocks = new_blocks
    return sorted(b.shape[1] for b in blocks)


def _solve_cols_mod_p(Bk, img, p):
    """X with Bk X = img (Bk has independent columns)."""
    k = Bk.shape[1]
    aug = np.concatenate([Bk, img], axis=1) % p
    rows = [list(map(int, r)) for r in aug]
    R = _rref_mod_p(rows, p)
    X = np.array([r[k:] for r in R[:k]], dtype=np.int64)
    return X % p


def _charpoly_mod_p(X, p) -> list[int]:
    from .exact import charpoly as cp_exact
    f = cp_exact([[int(x) for x in r] for r in X])
    return fp.trim([int(c) for c in f.coeffs], p)


def _poly_at_matrix(phi, X, p):
    k = X.shape[0]
    out = np.zeros((k, k), dtype=np.int64)
    P = np.eye(k, dtype=np.int64)
    for c in phi:
        out = (out + c * P) % p
        P = (P @ X) % p
    return out


def _kernel_mod_p(M, p):
    k = M.shape[1]
    R = _rref_mod_p([list(map(int, r)) for r in M], p)
    pivots = []
    for row in R:
        pivots.append(next(i for i, x in enumerate(row) if x))
    free = [j for j in range(k) if j not in pivots]
    vecs = []
    for fcol in free:
        v = [0] * k
        v[fcol] = 1
        for row, pc in zip(R, pivots):
            v[pc] = (-row[fcol]) % p
        vecs.append(v)
    return np.array(vecs, dtype=np.int64).T.reshape(k, len(vecs))


def _contains(H, v) -> bool:
    """Is integer vector v in the row lattice of the upper-triangular HNF H?"""
    v = list(v)
    for row in H:
        c = next(i for i, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def _endomorphism_blocks(L: MonogenicAlgebra, H, p: int, e: int) -> list[int]:
    """Local-factor ranks of End(I) (x with x I in I) for I = row span of H.

    End(I) lies between R and p^-e R; it is p^-e times the kernel of
    y -> (I-coordinates of y b_i) mod p^e on R / p^e R.
    """
    d = len(H)
    q = p ** e
    if e > 0:
        if q ** d > 2_000_000:
            raise Infeasible("endomorphism ring search too large")
        images = []
        for k in range(d):
            bk = L.beta_power(k)
            images.append([c for r in H for c in coords_in_basis(H, L.coords(L.mul(bk, Poly(r))))])
        Phi = np.array([[int(x) for x in col] for col in images], dtype=np.int64)  # (d, d*d)
        ys = np.array(list(itertools.product(range(q), repeat=d)), dtype=np.int64)
        ok = np.all((ys @ Phi) % q == 0, axis=1)
        gens = [list(y) for y in ys[ok]] + [[q * int(i == j) for j in range(d)] for i in range(d)]
        S_rows = hnf_rows(gens)  # basis of q * End(I)
        S_basis = [[Fraction(x, q) for x in r] for r in S_rows]
    else:
        S_basis = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    mats = []
    for r in S_basis:
        x = Poly(r)
        M = _mult_on_basis(L, S_basis, x)
        mats.append([[int(Fraction(v)) for v in row] for row in M])
    return _primary_blocks(mats, p)


def local_ideal_census(f: Poly, alpha: AlphaClass, p: int, e: int | None = None) -> dict:
    """All Z_p[beta]-lattices I with I^2 in alpha R and N(I)^2 = N(alpha)
    (up to unit squares), found by exhaustion between p^-e R and p^(e+t) R.

    The default e = floor(v_p(disc f) / 2) is at least the index of R in the
    maximal order, which is enough: every such I satisfies p^delta J in I in J,
    with J the maximal-order ideal with J^2 = alpha O.
    """
    if p == 2:
        raise Unsupported("local census at p = 2 is not implemented")
    L = MonogenicAlgebra(f)
    d = f.degree
    if not alpha.alpha.is_integral():
        raise ValidationError("alpha must be integral")
    vD = vp(discriminant(f), p)
    e = vD // 2 if e is None else e
    vN = vp(alpha.norm, p)
    if vN % 2:
        return {"p": p, "e": e, "count": 0, "ideals": [], "reason": "odd norm valuation"}
    t = vN // 2
    unit = Fraction(alpha.norm) / Fraction(p) ** vN
    u = unit.numerator * pow(unit.denominator, -1, p) % p
    if pow(u, (p - 1) // 2, p) != 1:
        return {"p": p, "e": e, "count": 0, "ideals": [], "reason": "norm not a unit square"}
    ainv = L.inv(alpha.alpha)
    # scaled lattices I' = p^e I sit between p^(2e+t) R and R
    Nbot = 2 * e + t
    target = t + e * d
    bottom = p ** Nbot

    def hnf_key(rows):
        return tuple(tuple(r) for r in hnf_rows(rows + [[bottom * int(i == j) for j in range(d)] for i in range(d)]))

    def index_exp(H):
        prod_ = 1
        for i, r in enumerate(H):
            prod_ *= r[i]
        return vp(prod_, p)

    top = hnf_key([[int(i == j) for j in range(d)] for i in range(d)])
    seen = {top}
    frontier = [top]
    found = []
    while frontier:
        nxt = []
        for H in frontier:
            ie = index_exp(H)
            if ie == target:
                found.append(H)
                continue  # children have larger index
            Tb = _mult_on_basis(L, [list(r) for r in H], Poly.x())
            Tb = [[int(x) % p for x in row] for row in Tb]
            for W in invariant_subspaces(Tb, p):
                if len(W) == d:
                    continue
                gens = [[sum(w[i] * H[i][j] for i in range(d)) for j in range(d)] for w in W]
                gens += [[p * x for x in r] for r in H]
                K = hnf_key(gens)
                if K in seen or index_exp(K) > target:
                    continue
                seen.add(K)
                nxt.append(K)
        frontier = nxt
    ideals = []
    scale = Fraction(1, p ** e)
    for H in sorted(found):
        # I^2 in alpha R  <=>  alpha^-1 h_i h_j / p^(2e) is p-integral
        ok = True
        for i in range(d):
            for j in range(i, d):
                q_ = L.mul(ainv, L.mul(Poly(H[i]), Poly(H[j])))
                if any(vp(Fraction(c) * scale * scale, p) < 0 for c in q_.coeffs):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        blocks = _endomorphism_blocks(L, [list(r) for r in H], p, e)
        stab = sum(1 for S in itertools.product((0, 1), repeat=len(blocks))
                   if sum(b for s, b in zip(S, blocks) if s) % 2 == 0)
        ideals.append({"hnf": [[str(Fraction(x) * scale) for x in r] for r in H],
                       "end_blocks": blocks, "stabilizer": stab})
    mass = sum(Fraction(1, I["stabilizer"]) for I in ideals)
    return {"p": p, "e": e, "t": t, "count": len(ideals), "mass": mass, "ideals": ideals}
