"""Exact arithmetic: dense polynomials, integer/rational matrices, Bareiss
determinants, resultants, discriminants, Sturm chains and Hermite normal forms.

Polynomials are stored lowest degree first.  Coefficients are Python ``int``
or :class:`fractions.Fraction`; nothing here ever touches floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def _exact_quotient(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return Fraction(a) / b


class Poly:
    """Immutable dense univariate polynomial with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_norm(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    # construction -----------------------------------------------------
    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, a) -> "Poly":
        return cls((a,))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = cls((1,))
        for r in roots:
            out = out * cls((-r, 1))
        return out

    @classmethod
    def odd_model(cls, c: Sequence[int]) -> "Poly":
        """x^(2n+1) + c2 x^(2n-1) + ... + c_(2n+1), from (c2, ..., c_(2n+1))."""
        d = len(c) + 1
        coeffs = [0] * (d + 1)
        coeffs[d] = 1
        for k, ck in enumerate(c, start=2):
            coeffs[d - k] = ck
        return cls(coeffs)

    # basic protocol ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lc == 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and a == 1:
                terms.append(mono)
            elif mono and a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    # arithmetic -------------------------------------------------------
    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self), len(other))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(a * other for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out, base = Poly((1,)), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def divmod(self, other: "Poly"):
        """Division with remainder over the rationals (exact, integer when possible)."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [0] * max(len(r) - len(other) + 1, 0)
        lc = other.lc
        for i in range(len(r) - len(other), -1, -1):
            a = r[i + other.degree]
            if a == 0:
                continue
            t = _exact_quotient(a, lc)
            q[i] = t
            for j, b in enumerate(other.coeffs):
                r[i + j] -= t * b
        return Poly(q), Poly(r[: other.degree] if other.degree > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def compose(self, g: "Poly") -> "Poly":
        acc = Poly()
        for a in reversed(self.coeffs):
            acc = acc * g + a
        return acc

    def derivative(self) -> "Poly":
        return Poly(i * a for i, a in enumerate(self.coeffs) if i > 0)

    def monic(self) -> "Poly":
        lc = self.lc
        return Poly(Fraction(a) / lc for a in self.coeffs)

    def content(self) -> Fraction:
        """Positive rational content, so that self / content is primitive integral."""
        if not self.coeffs:
            return Fraction(0)
        den = 1
        for a in self.coeffs:
            d = Fraction(a).denominator
            den = den * d // gcd(den, d)
        g = 0
        for a in self.coeffs:
            g = gcd(g, int(Fraction(a) * den))
        return Fraction(g, den)

    def primitive(self) -> "Poly":
        c = self.content()
        p = Poly(Fraction(a) / c for a in self.coeffs)
        return -p if p.lc < 0 else p

    def is_integral(self) -> bool:
        return all(Fraction(a).denominator == 1 for a in self.coeffs)

    def to_json(self) -> str:
        return json.dumps(poly_to_strings(self))


def poly_to_strings(f: Poly) -> list[str]:
    return [str(a) for a in f.coeffs]


def poly_from_strings(items: Sequence[str]) -> Poly:
    return Poly(Fraction(s) for s in items)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g monic over Q."""
    r0, r1 = a, b
    s0, s1 = Poly((1,)), Poly()
    t0, t1 = Poly(), Poly((1,))
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = Fraction(r0.lc)
    return r0 * (1 / lc), s0 * (1 / lc), t0 * (1 / lc)


# ---------------------------------------------------------------------------
# matrices (lists of rows)

def mat_identity(n: int, one=1):
    return [[one if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_transpose(a):
    return [list(r) for r in zip(*a)]


def mat_add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in r] for r in a]


def mat_is_symmetric(a) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def det_bareiss(m):
    """Fraction-free determinant.

    Works for entries in any exact integral domain whose elements support
    ``+ - *`` and exact division: ints, Fractions and :class:`Poly`.
    """
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    is_poly = any(isinstance(x, Poly) for r in a for x in r)
    zero = Poly() if is_poly else 0
    one = Poly((1,)) if is_poly else 1

    def _is_zero(x):
        return x.is_zero() if isinstance(x, Poly) else x == 0

    def _div(x, y):
        if isinstance(x, Poly) or isinstance(y, Poly):
            xp = x if isinstance(x, Poly) else Poly.const(x)
            yp = y if isinstance(y, Poly) else Poly.const(y)
            return xp.exact_div(yp)
        if isinstance(x, Fraction) or isinstance(y, Fraction):
            return Fraction(x) / y
        q, r = divmod(x, y)
        assert r == 0, "Bareiss division must be exact"
        return q

    sign = 1
    prev = one
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def det_cofactor(m):
    """Laplace expansion; only meant as an oracle for tiny matrices."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def standard_form(n: int):
    """The (2n+1)x(2n+1) anti-identity Gram matrix A."""
    if n < 1:
        raise ValueError("genus must be at least 1")
    d = 2 * n + 1
    return [[1 if i + j == d - 1 else 0 for j in range(d)] for i in range(d)]


def charpoly_pencil(B, n: int) -> Poly:
    """(-1)^n det(xA - B) as a monic polynomial of degree 2n+1."""
    d = 2 * n + 1
    if len(B) != d or any(len(r) != d for r in B):
        raise ValueError(f"expected a {d}x{d} matrix for genus {n}")
    x = Poly.x()
    pencil = [[(x if i + j == d - 1 else Poly()) - B[i][j] for j in range(d)] for i in range(d)]
    f = det_bareiss(pencil)
    return -f if n % 2 else f


def charpoly(M) -> Poly:
    """det(xI - M) by Bareiss over Q[x]."""
    d = len(M)
    x = Poly.x()
    m = [[(x if i == j else Poly()) - M[i][j] for j in range(d)] for i in range(d)]
    return det_bareiss(m)


# ---------------------------------------------------------------------------
# resultants and discriminants

def sylvester_matrix(f: Poly, g: Poly):
    m, n = f.degree, g.degree
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(f.coeffs)) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(g.coeffs)) + [0] * (size - n - 1 - i))
    return rows


def resultant(f: Poly, g: Poly):
    """Res(f, g) by a subresultant-free Euclidean recursion over Q."""
    if f.is_zero() or g.is_zero():
        return 0
    m, n = f.degree, g.degree
    if n == 0:
        return g.lc ** m
    if m == 0:
        return f.lc ** n
    if m < n:
        s = -1 if (m * n) % 2 else 1
        return s * resultant(g, f)
    r = f % g
    if r.is_zero():
        return 0
    # Res(f, g) = (-1)^{mn} lc(g)^{m - deg r} Res(g, r)
    s = -1 if (m * n) % 2 else 1
    val = s * Fraction(g.lc) ** (m - r.degree) * resultant(g, r)
    return _norm(Fraction(val))


def discriminant(f: Poly):
    """disc(f) = (-1)^{d(d-1)/2} Res(f, f') / lc(f)."""
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    r = resultant(f, f.derivative())
    s = -1 if (d * (d - 1) // 2) % 2 else 1
    return _norm(Fraction(s * r) / f.lc)


# ---------------------------------------------------------------------------
# Sturm chains and real roots

def sturm_chain(f: Poly) -> list[Poly]:
    chain = [f, f.derivative()]
    while True:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append(-r)
    return chain


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_changes(vals) -> int:
    signs = [s for s in (_sign(v) for v in vals) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_inf(p: Poly, positive: bool) -> int:
    s = _sign(p.lc)
    if not positive and p.degree % 2:
        s = -s
    return s


def sturm_count(chain: Sequence[Poly], lo=None, hi=None) -> int:
    """Number of distinct real roots in (lo, hi]; ``None`` means infinity."""
    left = [_sign_at_inf(p, False) for p in chain] if lo is None else [p(lo) for p in chain]
    right = [_sign_at_inf(p, True) for p in chain] if hi is None else [p(hi) for p in chain]
    return _sign_changes(left) - _sign_changes(right)


def is_squarefree(f: Poly) -> bool:
    return poly_gcd(f, f.derivative()).degree == 0


def sturm_real_root_count(f: Poly) -> int:
    """Exact count of distinct real roots of a squarefree polynomial."""
    if f.degree < 1:
        return 0
    if not is_squarefree(f):
        raise ValueError("sturm_real_root_count needs a squarefree polynomial")
    return sturm_count(sturm_chain(f))


def cauchy_bound(f: Poly) -> Fraction:
    lc = abs(Fraction(f.lc))
    return 1 + max((abs(Fraction(a)) / lc for a in f.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(f: Poly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi] each holding exactly one real root, increasing."""
    if not is_squarefree(f):
        raise ValueError("root isolation needs a squarefree polynomial")
    chain = sturm_chain(f)
    b = cauchy_bound(f)
    out = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        k = sturm_count(chain, lo, hi)
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


def refine_root(f: Poly, chain, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Halve an isolating interval (lo, hi] of f, keeping the root inside."""
    mid = (lo + hi) / 2
    if sturm_count(chain, lo, mid) == 1:
        return lo, mid
    return mid, hi


def sign_at_root(g: Poly, f: Poly, interval, max_steps: int = 4000) -> int:
    """Certified sign of g at the unique root of f in the half-open interval.

    Refines until g has no root on the closed interval.  Raises if g vanishes
    at the root (gcd check) or the refinement budget runs out.
    """
    lo, hi = interval
    fchain = sturm_chain(f)
    h = poly_gcd(f, g)
    if h.degree > 0 and sturm_count(sturm_chain(h), lo, hi) > 0:
        raise ArithmeticError("g vanishes at the isolated root")
    gsf = g.exact_div(poly_gcd(g, g.derivative())) if g.degree > 0 else g
    gchain = sturm_chain(gsf) if gsf.degree > 0 else None
    for _ in range(max_steps):
        if gchain is None:
            return _sign(g.lc)
        ends_ok = g(lo) != 0 and g(hi) != 0
        if ends_ok and sturm_count(gchain, lo, hi) == 0:
            return _sign(g(hi))
        lo, hi = refine_root(f, fchain, lo, hi)
    raise ArithmeticError("sign certification did not terminate")


# ---------------------------------------------------------------------------
# lattices and Hermite normal form

def hnf_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the Z-span of integer rows.

    Output is upper triangular with positive pivots and entries above each
    pivot reduced into [0, pivot).  Zero rows are dropped.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        if r >= len(a):
            break
        found = False
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            found = True
            best = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[best] = a[best], a[r]
            clean = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return a[:r]


@dataclass(frozen=True)
class LatticeBasis:
    """Full-rank lattice (1/denominator) * span(rows of basis)."""

    basis: tuple[tuple[int, ...], ...]
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        d = len(self.basis)
        if any(len(r) != d for r in self.basis):
            raise ValueError("basis must be square")

    @classmethod
    def from_rows(cls, rows, denominator: int = 1) -> "LatticeBasis":
        return cls(tuple(tuple(int(x) for x in r) for r in rows), denominator)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def det(self) -> int:
        return det_bareiss([list(r) for r in self.basis])

    def index(self) -> Fraction:
        """[Z^d : L] as a rational number (fractional lattices give < 1)."""
        return Fraction(abs(self.det()), self.denominator ** self.rank)

    def rational_rows(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.denominator) for x in r] for r in self.basis]


def hermite_normal_form(L: LatticeBasis) -> LatticeBasis:
    """Unique upper-triangular HNF of a nonsingular lattice basis."""
    if L.det() == 0:
        raise ValueError("singular basis")
    h = hnf_rows(L.basis)
    return LatticeBasis.from_rows(h, L.denominator)


def lattice_from_generators(vectors: Sequence[Sequence], rank: int) -> LatticeBasis:
    """HNF lattice spanned by rational vectors; raises if not of full rank."""
    den = 1
    for v in vectors:
        for x in v:
            q = Fraction(x).denominator
            den = den * q // gcd(den, q)
    rows = [[int(Fraction(x) * den) for x in v] for v in vectors]
    h = hnf_rows(rows)
    if len(h) != rank:
        raise ValueError("generators do not span a full-rank lattice")
    # reduce the common denominator
    g = den
    for r in h:
        for x in r:
            g = gcd(g, x)
    if g > 1:
        h = [[x // g for x in r] for r in h]
        den //= g
    return LatticeBasis.from_rows(h, den)


def solve_rational(M, b):
    """Solve M y = b exactly over Q for square nonsingular M (lists)."""
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(M, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                t = a[i][c]
                a[i] = [x - t * y for x, y in zip(a[i], a[c])]
    return [_norm(a[i][n]) for i in range(n)]


def coords_in_basis(rows, v):
    """Coordinates y with sum_i y_i rows[i] = v (rows square, nonsingular)."""
    return solve_rational(mat_transpose(rows), v)


def mat_to_strings(m) -> list[list[str]]:
    return [[str(x) for x in r] for r in m]


def mat_from_strings(m) -> list[list]:
    return [[_norm(Fraction(s)) for s in r] for r in m]
