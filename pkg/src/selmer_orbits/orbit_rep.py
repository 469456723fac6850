"""The representation V of SO(W): symmetric (2n+1)x(2n+1) matrices B = AM with
anti-trace zero, where A is the anti-diagonal split form.

Matrices are lists of rows, 0-indexed internally.  Where a docstring speaks of
b_ij it means the 1-indexed entry B[i-1][j-1].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .algebra import MonogenicAlgebra
from .exact import (
    Poly,
    charpoly,
    charpoly_pencil,
    discriminant,
    is_squarefree,
    isolate_real_roots,
    mat_identity,
    mat_mul,
    sign_at_root,
    standard_form,
    sturm_real_root_count,
)

__all__ = [
    "OperatorRep",
    "SignPattern",
    "WeightVector",
    "standard_form",
    "anti_trace",
    "invariants",
    "distinguished_rep",
    "nilpotent_regular",
    "nilpotent_subregular",
    "min_poly_degree",
    "reducibility_block_tests",
    "weight",
    "weight_identities",
    "combinatorial_lemma_check",
    "real_component",
    "sign_pattern",
    "classify_component",
    "root_element",
    "torus_element",
    "act",
]


def anti_trace(B) -> object:
    d = len(B)
    return sum(B[i][d - 1 - i] for i in range(d))


@dataclass(frozen=True)
class OperatorRep:
    """A point of V: genus n and the symmetric Gram matrix B = A M.

    With ``modulus`` set, entries are residues and the invariants are checked
    modulo it.
    """

    n: int
    B: tuple[tuple, ...]
    modulus: int | None = None

    def __post_init__(self):
        d = 2 * self.n + 1
        B = tuple(tuple(r) for r in self.B)
        if len(B) != d or any(len(r) != d for r in B):
            raise ValueError(f"expected a {d}x{d} matrix")
        m = self.modulus
        if m is not None:
            B = tuple(tuple(x % m for x in r) for r in B)
        object.__setattr__(self, "B", B)
        sym = all((B[i][j] - B[j][i]) % m == 0 if m else B[i][j] == B[j][i]
                  for i in range(d) for j in range(i + 1, d))
        if not sym:
            raise ValueError("B must be symmetric")
        at = anti_trace(B)
        if (at % m if m else at) != 0:
            raise ValueError("B must have anti-trace zero")

    def matrix(self) -> list[list]:
        return [list(r) for r in self.B]

    def operator(self) -> list[list]:
        """T = A^{-1} B = A B."""
        return mat_mul(standard_form(self.n), self.matrix())


def invariants(B: OperatorRep) -> tuple:
    """(c2, ..., c_(2n+1)) read off (-1)^n det(xA - B)."""
    f = charpoly_pencil(B.matrix(), B.n)
    d = 2 * B.n + 1
    cs = tuple(f[d - k] for k in range(2, d + 1))
    if B.modulus:
        cs = tuple(int(Fraction(c) % B.modulus) for c in cs)
    return cs


def _trace_zero_monic(f: Poly, n: int):
    d = 2 * n + 1
    if f.degree != d or not f.is_monic():
        raise ValueError(f"need a monic polynomial of degree {d}")
    if f[d - 1] != 0:
        raise ValueError("polynomial must have no x^(2n) term")


def distinguished_basis(f: Poly) -> list[Poly]:
    """Monic p_0 = 1, p_1, ..., p_2n (deg p_i = i) whose Gram under the
    top-coefficient pairing on Q[x]/(f) is the anti-identity."""
    L = MonogenicAlgebra(f)
    d = f.degree
    top = d - 1
    basis: list[Poly] = []
    for i in range(d):
        p_i = L.beta_power(i)
        # kill pairings with p_j for top - i < j < i, using partners p_{top-j}
        corr = Poly()
        for j in range(top - i + 1, i):
            c = L.pairing(L.beta_power(i), basis[j])
            if c:
                corr = corr + basis[top - j] * c
        p_i = p_i - corr
        if 2 * i > top:
            q = L.pairing(p_i, p_i)
            if q:
                p_i = p_i - basis[top - i] * Fraction(q, 2)
        basis.append(L.reduce(p_i))
    return basis


def distinguished_rep(f: Poly, p: int | None = None) -> OperatorRep:
    """A representative of the distinguished orbit with characteristic polynomial f.

    Works over Q; with ``p`` (odd) the rational answer, whose denominators
    are powers of 2, is reduced modulo p.
    """
    d = f.degree
    if d % 2 == 0:
        raise ValueError("degree must be odd")
    n = (d - 1) // 2
    _trace_zero_monic(f, n)
    if p is not None:
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        from . import fp
        if not fp.is_squarefree([int(Fraction(a) % p) for a in f.coeffs], p):
            raise ValueError("f is inseparable mod p")
    elif discriminant(f) == 0:
        raise ValueError("f is inseparable")
    L = MonogenicAlgebra(f)
    basis = distinguished_basis(f)
    beta = Poly.x()
    B = [[L.pairing(basis[i], L.mul(beta, basis[j])) for j in range(d)] for i in range(d)]
    if p is not None:
        B = [[int(Fraction(x).numerator * pow(Fraction(x).denominator, -1, p) % p) for x in r] for r in B]
        return OperatorRep(n, B, modulus=p)
    return OperatorRep(n, B)


def _shift_rep(n: int, images: dict[int, int], scale=1) -> OperatorRep:
    """Operator sending basis vector j to basis vector images[j] (0-indexed)."""
    d = 2 * n + 1
    M = [[0] * d for _ in range(d)]
    for j, i in images.items():
        M[i][j] = scale
    B = mat_mul(standard_form(n), M)
    return OperatorRep(n, B)


def nilpotent_regular(n: int) -> OperatorRep:
    """E: f1 -> f2 -> ... -> fn -> u -> en -> ... -> e1 -> 0."""
    d = 2 * n + 1
    return _shift_rep(n, {j: j - 1 for j in range(1, d)})


def nilpotent_subregular(n: int, d_scalar=1) -> OperatorRep:
    """d * E' with E': f1 -> ... -> fn -> en -> ... -> e1 -> 0, u -> 0."""
    if d_scalar == 0:
        raise ValueError("d must be nonzero")
    d = 2 * n + 1
    images = {j: j - 1 for j in range(1, d) if j not in (n, n + 1)}
    images[n + 1] = n - 1  # f_n -> e_n skips u
    return _shift_rep(n, images, d_scalar)


def min_poly_degree(M) -> int:
    """Degree of the minimal polynomial: rank of span{I, M, M^2, ...} over Q."""
    d = len(M)
    rows = []
    P = mat_identity(d)
    for _ in range(d + 1):
        rows.append([Fraction(x) for r in P for x in r])
        P = mat_mul(P, M)
    return _rank(rows)


def _rank(rows) -> int:
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, len(a)):
            if a[i][c] != 0:
                t = a[i][c] / a[rank][c]
                a[i] = [x - t * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def reducibility_block_tests(B: OperatorRep) -> dict:
    """Zero-block criteria on the Gram matrix.

    disc_zero_block: some k in 1..n has the top-left k x (2n+1-k) block zero
    (this forces a repeated root of det(Ax - B)).
    distinguished_shape: b_ij = 0 whenever i + j < 2n+1 (1-indexed).
    """
    n = B.n
    d = 2 * n + 1
    M = B.B
    block = any(all(M[i][j] == 0 for i in range(k) for j in range(d - k)) for k in range(1, n + 1))
    shape = all(M[i][j] == 0 for i in range(d) for j in range(d) if i + j < d - 2)
    return {"disc_zero_block": block, "distinguished_shape": shape}


# ---------------------------------------------------------------------------
# weights of the coordinates b_ij under lambda * (s_1, ..., s_n)

@dataclass(frozen=True)
class WeightVector:
    e_lambda: int
    e_s: tuple[int, ...]

    def __mul__(self, other: "WeightVector") -> "WeightVector":
        return WeightVector(self.e_lambda + other.e_lambda,
                            tuple(a + b for a, b in zip(self.e_s, other.e_s)))

    def __str__(self):
        parts = [f"lambda^{self.e_lambda}"] if self.e_lambda else []
        parts += [f"s{k + 1}^{e}" for k, e in enumerate(self.e_s) if e]
        return "*".join(parts) or "1"


def _w_index(n: int, t: int) -> int:
    """w_t = s_t for t <= n and s_(2n+1-t) after; returns the 0-based s index."""
    return t - 1 if t <= n else 2 * n - t


def coordinates(n: int) -> list[tuple[int, int]]:
    """The n(2n+3) coordinates b_ij, i <= j, excluding b_(n+1)(n+1)."""
    d = 2 * n + 1
    return [(i, j) for i in range(1, d + 1) for j in range(i, d + 1) if (i, j) != (n + 1, n + 1)]


def weight(n: int, i: int, j: int) -> WeightVector:
    """w(b_ij) = lambda s_1^-2 ... s_n^-2 (w_1...w_(i-1)) (w_1...w_(j-1))."""
    d = 2 * n + 1
    if not (1 <= i <= j <= d):
        raise ValueError("need 1 <= i <= j <= 2n+1")
    if (i, j) == (n + 1, n + 1):
        raise ValueError("b_(n+1)(n+1) is not a coordinate of V")
    e = [-2] * n
    for t in range(1, i):
        e[_w_index(n, t)] += 1
    for t in range(1, j):
        e[_w_index(n, t)] += 1
    return WeightVector(1, tuple(e))


def weight_identities(n: int) -> dict:
    """Check the anti-diagonal, sub-anti-diagonal and total-product identities."""
    d = 2 * n + 1
    anti = all(weight(n, i, d + 1 - i) == WeightVector(1, (0,) * n)
               for i in range(1, n + 1))
    sub = all(
        weight(n, i, d - i) == WeightVector(1, tuple(-1 if k == i - 1 else 0 for k in range(n)))
        for i in range(1, n + 1)
    )
    total = WeightVector(0, (0,) * n)
    for i, j in coordinates(n):
        total = total * weight(n, i, j)
    product = total == WeightVector(n * (2 * n + 3), (0,) * n)
    return {"n": n, "anti_diagonal": anti, "sub_anti_diagonal": sub,
            "product": product, "total_weight": str(total), "ok": anti and sub and product}


def lower_coordinates(n: int) -> list[tuple[int, int]]:
    """U^- = {b_ij : i + j < 2n+1, i <= j}."""
    d = 2 * n + 1
    return [(i, j) for i in range(1, d + 1) for j in range(i, d + 1) if i + j < d]


def combinatorial_lemma_check(n: int) -> dict:
    """Exhaustive check over all U0 in U^- of

        sum_k max{0, e_k(U0) + k^2 - 2kn} <= |U0|,

    with equality exactly at U0 = empty and U0 = U^-, where e_k(U0) is minus
    the total exponent of s_k in prod_{b in U0} w(b).
    """
    if n > 4:
        raise ValueError("exhaustive check is limited to n <= 4")
    U = lower_coordinates(n)
    u = len(U)
    neg_exp = np.array([[-e for e in weight(n, i, j).e_s] for i, j in U], dtype=np.int64)
    masks = np.arange(1 << u, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(u)) & 1).astype(np.int64)
    e = bits @ neg_exp  # (2^u, n)
    k = np.arange(1, n + 1)
    lhs = np.maximum(0, e + k * k - 2 * k * n).sum(axis=1)
    size = bits.sum(axis=1)
    holds = bool(np.all(lhs <= size))
    eq_masks = masks[lhs == size]
    full = (1 << u) - 1
    equality_ok = set(eq_masks.tolist()) == {0, full}
    return {"n": n, "num_subsets": 1 << u, "U_minus": U, "inequality": holds,
            "equality_only_at_extremes": equality_ok, "ok": holds and equality_ok}


# ---------------------------------------------------------------------------
# real orbits

def real_component(f: Poly) -> int:
    """m with 2m+1 = number of real roots of f."""
    if not is_squarefree(f):
        raise ValueError("f must be separable")
    r = sturm_real_root_count(f)
    return (r - 1) // 2


@dataclass(frozen=True)
class SignPattern:
    signs: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(x) for x in self.signs)
        if len(s) % 2 == 0 or any(x not in (1, -1) for x in s):
            raise ValueError("a sign pattern is an odd-length sequence of +1/-1")
        if s.count(-1) != (len(s) - 1) // 2:
            raise ValueError("a pattern of length 2m+1 has exactly m minus signs")
        object.__setattr__(self, "signs", s)

    @property
    def m(self) -> int:
        return (len(self.signs) - 1) // 2

    def __str__(self):
        return "".join("+" if s > 0 else "−" for s in self.signs)

    @classmethod
    def parse(cls, text: str) -> "SignPattern":
        return cls(tuple(1 if ch == "+" else -1 for ch in text.replace("-", "−")))


def adjugate_trace_poly(T) -> tuple[Poly, Poly]:
    """(f, q) with f = det(xI - T) and q(x) = tr(A adj(xI - T)), A = anti-identity.

    Uses adj(xI - T) = sum_k x^(d-1-k) N_k with N_0 = I, N_k = T N_(k-1) + a_k I,
    where f = x^d + a_1 x^(d-1) + ... + a_d.
    """
    d = len(T)
    f = charpoly(T)
    a = [f[d - k] for k in range(d + 1)]  # a[0] = 1
    Aflip = lambda N: sum(N[i][d - 1 - i] for i in range(d))  # tr(A N)
    N = mat_identity(d)
    q_coeffs = [0] * d
    q_coeffs[d - 1] = Aflip(N)
    for k in range(1, d):
        N = mat_mul(T, N)
        for i in range(d):
            N[i][i] += a[k]
        q_coeffs[d - 1 - k] = Aflip(N)
    return f, Poly(q_coeffs)


def sign_pattern(B: OperatorRep) -> SignPattern:
    """Signs of <w_i, w_i> for the real eigenvectors of T = A^{-1} B, ordered by
    increasing eigenvalue.

    For a simple eigenvalue lam, A adj(lam I - T) = f'(lam) A w w^T A / <w, w>,
    so sign <w, w> = sign f'(lam) * sign tr(A adj(lam I - T)).  Both signs are
    certified by exact rational root isolation.
    """
    T = [[Fraction(x) for x in r] for r in B.operator()]
    f, q = adjugate_trace_poly(T)
    if not is_squarefree(f):
        raise ValueError("characteristic polynomial is not separable")
    fp_ = f.derivative()
    signs = []
    for iv in isolate_real_roots(f):
        s = sign_at_root(fp_, f, iv) * sign_at_root(q, f, iv)
        signs.append(s)
    return SignPattern(tuple(signs))


def soluble_patterns(m: int) -> list[SignPattern]:
    """The 2^m patterns '+' followed by m blocks in {(-+), (+-)}, in tau order."""
    out = []
    for bits in itertools.product((0, 1), repeat=m):
        s = [1]
        for b in bits:
            s += [1, -1] if b else [-1, 1]
        out.append(SignPattern(tuple(s)))
    return out


def all_patterns(m: int) -> list[SignPattern]:
    """All C(2m+1, m) patterns, ordered by tau."""
    sol = soluble_patterns(m)
    sol_set = {p.signs for p in sol}
    rest = []
    for minus in itertools.combinations(range(2 * m + 1), m):
        s = tuple(-1 if i in minus else 1 for i in range(2 * m + 1))
        if s not in sol_set:
            rest.append(s)
    # lexicographic with '+' before '-'
    rest.sort(key=lambda s: tuple(0 if x > 0 else 1 for x in s))
    out = sol + [SignPattern(s) for s in rest]
    assert len(out) == comb(2 * m + 1, m)
    return out


def classify_component(pattern: SignPattern) -> tuple[int, int]:
    """(m, tau): tau = 1 distinguished, tau <= 2^m soluble, larger otherwise."""
    m = pattern.m
    for tau, p in enumerate(all_patterns(m), start=1):
        if p.signs == pattern.signs:
            return m, tau
    raise AssertionError("unreachable: pattern not enumerated")


# ---------------------------------------------------------------------------
# elements of SO(W)

def root_element(n: int, i: int, j: int, c=1, modulus: int | None = None):
    """exp(c X_ij) with X_ij = E_ij - E_{j'i'} (0-indexed, i' = 2n - i).

    Requires i != j and i + j != 2n.  Short roots (one index equal to n) get
    the c^2/2 correction, so the result is integral when c is even or when
    working modulo an odd prime.
    """
    d = 2 * n + 1
    if i == j or i + j == d - 1:
        raise ValueError("not a root vector")
    bar = lambda k: d - 1 - k
    g = [[Fraction(int(a == b)) for b in range(d)] for a in range(d)]
    g[i][j] += c
    g[bar(j)][bar(i)] -= c
    # X^2 = -E_{i, i'} when j is the middle index, -E_{j', j} when i is
    if j == n:
        g[i][bar(i)] -= Fraction(c * c, 2)
    elif i == n:
        g[bar(j)][j] -= Fraction(c * c, 2)
    if modulus is not None:
        return [[int(x.numerator * pow(x.denominator, -1, modulus) % modulus) for x in r] for r in g]
    return [[int(x) if x.denominator == 1 else x for x in r] for r in g]


def torus_element(n: int, ts: Sequence, modulus: int | None = None):
    d = 2 * n + 1
    g = [[0] * d for _ in range(d)]
    for k, t in enumerate(ts):
        if modulus is None:
            inv = Fraction(1) / t
            inv = int(inv) if inv.denominator == 1 else inv
        else:
            inv = pow(t, -1, modulus)
        g[k][k] = t
        g[d - 1 - k][d - 1 - k] = inv
    g[n][n] = 1
    return g


def act(g, B, modulus: int | None = None):
    """h^T B h with h = g: the action of SO(W) on Gram matrices."""
    from .exact import mat_transpose
    out = mat_mul(mat_mul(mat_transpose(g), B), g)
    if modulus is not None:
        out = [[x % modulus for x in r] for r in out]
    return out
