"""p-adic tools: approximations, Newton polygons, factor shapes over Q_p,
local 2-torsion bookkeeping, odd-p lattice normalization and the 3-adic
Chabauty bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import fp
from .curves import HyperCurve, mod3_chabauty_filter
from .errors import Unsupported, ValidationError
from .exact import Poly, discriminant, sturm_real_root_count

INF = float("inf")
MAX_DISC_VALUATION = 20


def vp(x, p: int):
    """p-adic valuation of a rational; +inf at zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PadicApprox:
    """p^valuation * unit, with the unit known modulo p^prec.

    Zero is valuation=inf, unit=0.  Arithmetic keeps the absolute precision
    valuation + prec pessimistic.
    """

    p: int
    valuation: float | int
    unit: int
    prec: int

    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> "PadicApprox":
        x = Fraction(x)
        if x == 0:
            return cls(p, INF, 0, prec)
        v = vp(x, p)
        u = x / Fraction(p) ** v
        mod = p ** prec
        return cls(p, v, u.numerator * pow(u.denominator, -1, mod) % mod, prec)

    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def abs_prec(self):
        return self.valuation + self.prec

    def to_rational(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def _lift(self, other) -> "PadicApprox":
        if isinstance(other, PadicApprox):
            if other.p != self.p:
                raise ValidationError("mixed primes")
            return other
        return PadicApprox.from_rational(other, self.p, self.prec)

    def __add__(self, other):
        other = self._lift(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        ap = min(self.abs_prec, other.abs_prec)
        s = self.to_rational() + other.to_rational()
        if s == 0 or vp(s, self.p) >= ap:
            return PadicApprox(self.p, INF, 0, 0)
        v = vp(s, self.p)
        return PadicApprox.from_rational(s, self.p, ap - v)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        mod = self.p ** self.prec
        return PadicApprox(self.p, self.valuation, (-self.unit) % mod, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return PadicApprox(self.p, INF, 0, min(self.prec, other.prec))
        k = min(self.prec, other.prec)
        return PadicApprox(self.p, self.valuation + other.valuation,
                           self.unit * other.unit % self.p ** k, k)

    __rmul__ = __mul__

    def inverse(self) -> "PadicApprox":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return PadicApprox(self.p, -self.valuation, pow(self.unit, -1, self.p ** self.prec), self.prec)

    def equals(self, other, at_prec: int) -> bool:
        """Equality of absolute values modulo p^at_prec."""
        d = self - self._lift(other)
        return d.is_zero() or d.valuation >= at_prec


# ---------------------------------------------------------------------------
# Newton polygons

@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, int], ...]

    def segments(self) -> list[tuple[Fraction, int]]:
        """(slope, horizontal length) per segment, left to right."""
        out = []
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(v1 - v0, i1 - i0), i1 - i0))
        return out

    def root_valuations(self) -> list[tuple[Fraction, int]]:
        """(valuation, multiplicity) of the nonzero roots."""
        return [(-s, l) for s, l in self.segments()]

    def to_record(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}


def newton_polygon(f: Poly, p: int) -> NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)) over the nonzero coefficients."""
    if f.is_zero():
        raise ValidationError("zero polynomial has no Newton polygon")
    pts = [(i, vp(a, p)) for i, a in enumerate(f.coeffs) if a != 0]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


# ---------------------------------------------------------------------------
# factor shapes over Q_p

@dataclass(frozen=True)
class FactorShape:
    """Degrees of the irreducible factors of f over Q_p, with ramification indices."""

    degrees: tuple[int, ...]
    ram: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.degrees) - 1

    @property
    def unramified(self) -> bool:
        return all(e == 1 for e in self.ram)

    def to_record(self) -> dict:
        return {"degrees": list(self.degrees), "m": self.m}


def _reduce_int_poly(f: Poly, p: int) -> list[int]:
    return [int(Fraction(a).numerator * pow(Fraction(a).denominator, -1, p) % p) for a in f.coeffs]


def _residual_poly(G: Poly, p: int, i0: int, v0: int, a: int, b: int, L: int) -> list[int]:
    """Residual polynomial of the segment starting at (i0, v0) with slope -a/b."""
    out = []
    for j in range(L // b + 1):
        c = G[i0 + j * b]
        e = v0 - j * a
        if c == 0 or vp(c, p) > e:
            out.append(0)
        else:
            out.append(_reduce_int_poly(Poly([Fraction(c) / Fraction(p) ** e]), p)[0])
    return fp.trim(out, p)


def _cluster_shape(G: Poly, p: int, t: Fraction, count: int, depth: int) -> list[tuple[int, int]]:
    """Factor degrees (with ramification) for the roots of G of valuation > t.

    G is monic with integral coefficients and there are exactly ``count`` such
    roots.  Uses Ore's theorem: a segment of slope -a/b whose residual
    polynomial has a simple irreducible factor phi contributes one factor of
    degree b * deg(phi).  A repeated linear residual factor at integral slope
    is resolved by translating and recursing; anything else is unsupported.
    """
    if depth > 2 * MAX_DISC_VALUATION:
        raise Unsupported("ramification too deep for factor_shape")
    out: list[tuple[int, int]] = []
    if G[0] == 0:
        out.append((1, 1))  # the exact root 0
        G = G // Poly.x()
        count -= 1
    if count == 0:
        return out
    NP = newton_polygon(G, p)
    seen = 0
    for (i0, v0), (i1, v1) in zip(NP.vertices, NP.vertices[1:]):
        h = Fraction(v0 - v1, i1 - i0)
        if h <= t:
            continue
        L = i1 - i0
        seen += L
        a, b = h.numerator, h.denominator
        R = _residual_poly(G, p, i0, v0, a, b, L)
        for phi, e in fp.factor(R, p):
            if fp.deg(phi) == 1 and phi[0] == 0:
                continue  # z never divides a residual polynomial
            if e == 1:
                out.append((b * fp.deg(phi), b))
            elif b == 1 and fp.deg(phi) == 1:
                r = (-phi[0]) % p
                shift = Poly([Fraction(r) * Fraction(p) ** a, 1])
                out.extend(_cluster_shape(G.compose(shift), p, h, e, depth + 1))
            else:
                raise Unsupported(
                    f"repeated residual factor of degree {fp.deg(phi)} at slope {-h} (p={p})"
                )
    if seen != count:
        raise AssertionError("Newton polygon root count mismatch")
    return out


def factor_shape(f: Poly, p: int, k: int | None = None) -> FactorShape:
    """Factor degrees of a separable monic integral f over Q_p.

    The computation runs on exact integers, so k only has to be compatible
    with Hensel separation (k >= 2 v_p(disc) + 1); the default is 2v + 10.
    """
    if not f.is_monic() or not f.is_integral():
        raise ValidationError("factor_shape needs a monic integral polynomial")
    D = discriminant(f)
    if D == 0:
        raise ValidationError("f is not separable")
    v = vp(D, p)
    if v > MAX_DISC_VALUATION:
        raise Unsupported(f"v_{p}(disc) = {v} exceeds the supported bound {MAX_DISC_VALUATION}")
    if k is None:
        k = 2 * v + 10
    if k < 2 * v + 1:
        raise ValidationError(f"precision {k} is below 2 v_p(disc) + 1 = {2 * v + 1}")
    pieces: list[tuple[int, int]] = []
    for g, e in fp.factor(_reduce_int_poly(f, p), p):
        if e == 1:
            pieces.append((fp.deg(g), 1))
        elif fp.deg(g) == 1:
            a = (-g[0]) % p
            G = f.compose(Poly([a, 1]))
            pieces.extend(_cluster_shape(G, p, Fraction(0), e, 0))
        else:
            raise Unsupported(f"repeated residual factor of degree {fp.deg(g)} mod {p}")
    pieces.sort()
    if sum(d for d, _ in pieces) != f.degree:
        raise AssertionError("factor degrees do not sum to deg f")
    return FactorShape(tuple(d for d, _ in pieces), tuple(e for _, e in pieces))


def j2_local_order(f: Poly, p: int) -> int:
    """#J[2](Q_p) = 2^m."""
    return 2 ** factor_shape(f, p).m


def jmod2j_local_order(f: Poly, p: int, n: int) -> int:
    """#J(Q_p)/2J(Q_p): 2^m for odd p, 2^(n+m) at p = 2."""
    m = factor_shape(f, p).m
    return 2 ** (m + n) if p == 2 else 2 ** m


def local_unit_h1_order(f: Poly, p: int, n: int | None = None) -> int:
    """Order of the unramified part of H^1: 2^(2m) for odd p, 2^(2m+2n) at p = 2
    when every factor is unramified."""
    sh = factor_shape(f, p)
    if p == 2:
        if not sh.unramified:
            raise Unsupported("H^1 order at p = 2 is only available for unramified f")
        n = n if n is not None else (f.degree - 1) // 2
        return 2 ** (2 * sh.m + 2 * n)
    return 2 ** (2 * sh.m)


def local_orbit_count(m: int) -> int:
    """2^(2m-1) + 2^(m-1) for m >= 1, and 1 for m = 0."""
    if m < 0:
        raise ValidationError("m must be >= 0")
    if m == 0:
        return 1
    return 2 ** (2 * m - 1) + 2 ** (m - 1)


def local_mass_ratios(C: HyperCurve, extra_primes: Sequence[int] = ()) -> dict:
    """rho_v = #J(Q_v)/2J(Q_v) / #J[2](Q_v) at v in {inf, 2, odd p | Delta}.

    rho_p = 1 for odd p, 2^n at 2 and 2^m / 2^(m+n) at infinity.
    """
    from sympy import primefactors  # infrastructure: factoring the discriminant

    n = C.n
    f = C.f
    primes = sorted(set(primefactors(abs(C.disc))) | {2} | set(extra_primes))
    rows = {}
    unsupported = {}
    for p in primes:
        try:
            j2 = j2_local_order(f, p)
            jm = jmod2j_local_order(f, p, n)
        except Unsupported as exc:
            unsupported[str(p)] = str(exc)
            continue
        rows[str(p)] = {"j2": j2, "jmod2j": jm, "rho": Fraction(jm, j2)}
    m_inf = (sturm_real_root_count(f) - 1) // 2
    rows["inf"] = {"j2": 2 ** m_inf, "jmod2j": 2 ** m_inf, "rho": Fraction(2 ** m_inf, 2 ** (m_inf + n))}
    product = Fraction(1)
    for r in rows.values():
        product *= r["rho"]
    return {"c": list(C.c), "places": rows, "unsupported": unsupported,
            "product": product, "ok": not unsupported and product == 1}


# ---------------------------------------------------------------------------
# lattice normalization over Z_p, p odd

def _mat_mod(M, mod):
    return [[x % mod for x in r] for r in M]


def _bil(G, u, v, mod):
    return sum(u[i] * G[i][j] * v[j] for i in range(len(u)) for j in range(len(v))) % mod


def _rank_mod_p(vectors, p) -> list[int]:
    """Indices of a maximal independent subset of vectors mod p (greedy)."""
    basis: list[tuple[int, list[int]]] = []  # (pivot, row)
    chosen = []
    for idx, v in enumerate(vectors):
        w = [x % p for x in v]
        for piv, row in basis:
            if w[piv]:
                c = w[piv]
                w = [(a - c * b) % p for a, b in zip(w, row)]
        nz = next((i for i, x in enumerate(w) if x), None)
        if nz is None:
            continue
        inv = pow(w[nz], -1, p)
        w = [x * inv % p for x in w]
        basis = [(pv, [(a - r[nz] * b) % p for a, b in zip(r, w)]) for pv, r in basis]
        basis.append((nz, w))
        chosen.append(idx)
    return chosen


def _sqrt_mod_p(a: int, p: int) -> int:
    a %= p
    if a == 0 or pow(a, (p - 1) // 2, p) != 1:
        raise ValidationError("not a square unit")
    return next(x for x in range(1, p) if x * x % p == a)


def sqrt_mod_prime_power(a: int, p: int, k: int) -> int:
    """Square root of a unit a modulo p^k (p odd) by Newton lifting; raises if a
    is a nonsquare."""
    mod = p ** k
    r = _sqrt_mod_p(a, p)
    for _ in range(k.bit_length() + 1):
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    assert (r * r - a) % mod == 0
    return r


def _find_isotropic(G, p, dim) -> list[int]:
    """A primitive vector with q(v) = 0 mod p, by search over small vectors."""
    import itertools
    for weight in range(1, dim + 1):
        for support in itertools.combinations(range(dim), weight):
            for vals in itertools.product(range(1, p), repeat=weight):
                if vals[0] != 1:
                    continue
                v = [0] * dim
                for i, x in zip(support, vals):
                    v[i] = x
                if _bil(G, v, v, p) == 0:
                    return v
    raise ValidationError("no isotropic vector mod p")


def _normalize_rec(G, p, k) -> list[list[int]]:
    """Columns (as lists) of a basis change making G anti-diagonal-standard."""
    mod = p ** k
    dim = len(G)
    if dim == 1:
        d = G[0][0] % mod
        s = sqrt_mod_prime_power(pow(d, -1, mod), p, k)
        return [[s]]
    v = _find_isotropic(G, p, dim)
    # Hensel-lift v to an isotropic vector mod p^k
    u_idx = next(i for i in range(dim) if sum(v[a] * G[a][i] for a in range(dim)) % p)
    u = [int(i == u_idx) for i in range(dim)]
    for _ in range(2 * k + 2):
        q = _bil(G, v, v, mod)
        if q == 0:
            break
        c = q * pow(2 * _bil(G, v, u, mod), -1, mod) % mod
        v = [(a - c * b) % mod for a, b in zip(v, u)]
    assert _bil(G, v, v, mod) == 0
    w0 = [x * pow(_bil(G, v, u, mod), -1, mod) % mod for x in u]
    half = _bil(G, w0, w0, mod) * pow(2, -1, mod) % mod
    w = [(a - half * b) % mod for a, b in zip(w0, v)]
    assert _bil(G, v, w, mod) == 1 and _bil(G, w, w, mod) == 0
    if dim == 2:
        return [v, w]
    comp = []
    for i in range(dim):
        e = [int(j == i) for j in range(dim)]
        a, b = _bil(G, e, w, mod), _bil(G, e, v, mod)
        comp.append([(e[j] - a * v[j] - b * w[j]) % mod for j in range(dim)])
    keep = _rank_mod_p(comp, p)
    if len(keep) != dim - 2:
        raise AssertionError("orthogonal complement has the wrong rank")
    basis = [comp[i] for i in keep]
    H = [[_bil(G, x, y, mod) for y in basis] for x in basis]
    sub = _normalize_rec(H, p, k)
    cols = [[sum(c[t] * basis[t][j] for t in range(len(basis))) % mod for j in range(dim)] for c in sub]
    # cols are v_2..v_n, u, w_n..w_2 of the complement; wrap with v and w
    return [v] + cols + [w]


def lattice_normalize_odd_p(G, p: int, k: int) -> list[list[int]]:
    """U over Z/p^k with U^T G U = A (anti-identity) mod p^k.

    Requires p odd, G symmetric of odd size 2n+1 and det G = (-1)^n times a
    unit square.
    """
    if p == 2:
        raise Unsupported("lattice normalization at p = 2 is not implemented")
    if p % 2 == 0 or p < 3:
        raise ValidationError("p must be an odd prime")
    dim = len(G)
    if dim % 2 == 0 or any(len(r) != dim for r in G):
        raise ValidationError("G must be square of odd size")
    mod = p ** k
    G = _mat_mod(G, mod)
    if any((G[i][j] - G[j][i]) % mod for i in range(dim) for j in range(dim)):
        raise ValidationError("G must be symmetric")
    from .exact import det_bareiss
    n = (dim - 1) // 2
    det = det_bareiss([row[:] for row in G]) % p
    if det == 0:
        raise ValidationError("det G is not a p-adic unit")
    if pow((-1) ** n * det % p, (p - 1) // 2, p) != 1:
        raise ValidationError("det G is not (-1)^n times a square: no isometry with the split form")
    cols = _normalize_rec(G, p, k)
    U = [[cols[j][i] % mod for j in range(dim)] for i in range(dim)]
    return U


# ---------------------------------------------------------------------------
# Strassmann and Chabauty

def strassmann_zero_count(coeffs: Sequence, p: int, tail_lower: Callable[[int], float] | None = None) -> int:
    """Strassmann bound for the zeros of F(z) = sum coeffs[j] z^j on p Z_p.

    Substitutes z = p t and returns the largest index attaining the minimal
    valuation.  ``tail_lower(j)`` bounds v_p(coefficient of t^j) for j beyond
    the truncation; the bound is only returned when that tail provably stays
    above the minimum.
    """
    vals = [vp(Fraction(c) * Fraction(p) ** j, p) for j, c in enumerate(coeffs)]
    finite = [v for v in vals if v != INF]
    if not finite:
        raise ValidationError("series vanishes to the truncation order; bound undetermined")
    vmin = min(finite)
    N = max(j for j, v in enumerate(vals) if v == vmin)
    if tail_lower is not None:
        for j in range(len(coeffs), len(coeffs) + 200):
            if tail_lower(j) <= vmin:
                raise ValidationError("truncation too short to dominate the tail")
    return N


class _Series:
    """Truncated power series in u with Fraction coefficients."""

    def __init__(self, c, N):
        self.N = N
        self.c = [Fraction(x) for x in list(c)[:N]] + [Fraction(0)] * max(0, N - len(c))

    def __mul__(self, o):
        out = [Fraction(0)] * self.N
        for i, a in enumerate(self.c):
            if a:
                for j in range(self.N - i):
                    out[i + j] += a * o.c[j]
        return _Series(out, self.N)

    def __add__(self, o):
        return _Series([a + b for a, b in zip(self.c, o.c)], self.N)

    def inv(self):
        if self.c[0] == 0:
            raise ZeroDivisionError("series with zero constant term")
        out = [Fraction(0)] * self.N
        out[0] = 1 / self.c[0]
        for k in range(1, self.N):
            s = sum(self.c[j] * out[k - j] for j in range(1, k + 1))
            out[k] = -s / self.c[0]
        return _Series(out, self.N)

    def pow(self, e: int):
        base = self if e >= 0 else self.inv()
        out = _Series([1], self.N)
        for _ in range(abs(e)):
            out = out * base
        return out


def _w_series(C: HyperCurve, M: int) -> _Series:
    """w(u), u = z^2, with 1/w = 1 + sum_k c_k u^k w^-k and w(0) = 1; M terms."""
    w = _Series([1], M)
    for _ in range(M + 1):
        winv = w.inv()
        acc = _Series([1], M)
        for k in range(2, 2 * C.n + 2):
            ck = C.coeff(k)
            if ck:
                term = winv.pow(k) * _Series([0] * k + [ck], M)
                acc = acc + term
        new = acc.inv()
        if new.c == w.c:
            break
        w = new
    return w


def omega_expansion(C: HyperCurve, i: int, N: int | None = None) -> dict:
    """omega_i = -x^i dx / (2y) = (a_0 + a_1 z + a_2 z^2 + ...) dz to N terms,
    with z = x^n / y, plus the formal integral F(z).

    x = z^-2 w(z^2), so omega_i = -z^(2n-2-2i) w^(i-n) (-w + z w'/2) dz.
    """
    n = C.n
    if not 0 <= i <= n - 1:
        raise ValidationError("need 0 <= i <= n-1")
    if C.disc == 0:
        raise ValidationError("singular curve")
    N = N if N is not None else 4 * n + 10
    M = N // 2 + 2
    w = _w_series(C, M)
    # z w'(z) / 2 in terms of u = z^2: (z d/dz) u^j = 2j u^j
    zdw_half = _Series([j * w.c[j] for j in range(M)], M)
    core = w.pow(i - n) * (zdw_half + _Series([-x for x in w.c], M))
    core = _Series([-x for x in core.c], M)
    shift = n - 1 - i  # power of u in front
    a = [Fraction(0)] * N
    for j, cj in enumerate(core.c):
        e = 2 * (j + shift)
        if e < N:
            a[e] = cj
    F = [Fraction(0)] + [a[j] / (j + 1) for j in range(N - 1)]
    return {"i": i, "a": a, "F": F, "N": N}


def series_check(C: HyperCurve, N: int = 20) -> bool:
    """y^2 - f(x) vanishes to the working order after substituting the series."""
    M = N
    w = _w_series(C, M)
    # z^(4n+2) (y^2 - f(x)) = w^(2n) - sum_k c_k u^k w^(2n+1-k) where c_0 = 1, c_1 = 0
    lhs = w.pow(2 * C.n)
    rhs = w.pow(2 * C.n + 1)
    for k in range(2, 2 * C.n + 2):
        ck = C.coeff(k)
        if ck:
            rhs = rhs + w.pow(2 * C.n + 1 - k) * _Series([0] * k + [ck], M)
    return lhs.c == rhs.c


def _integral_tail(p: int) -> Callable[[int], float]:
    # coefficient of t^j in F(p t) is a_(j-1) p^j / j with a integral
    return lambda j: j - math.floor(math.log(j, p) + 1e-12)


def chabauty_bound_at_3(C: HyperCurve, N: int | None = None) -> dict:
    """Strassmann bounds on 3Z_3 for the regular differentials with a_0 or a_2 a unit.

    The Mordell-Weil rank hypothesis is recorded as an assumption, never checked.
    """
    if not mod3_chabauty_filter(C):
        return {"c": list(C.c), "applicable": False, "reason": "mod-3 filter fails"}
    n = C.n
    N = N if N is not None else 4 * n + 10
    per = []
    for i in range(n - 1, max(-1, n - 3), -1):
        ex = omega_expansion(C, i, N)
        a = ex["a"]
        if any(Fraction(x).denominator % 3 == 0 for x in a):
            raise AssertionError("non-integral differential coefficients")
        unit0 = vp(a[0], 3) == 0
        unit2 = vp(a[2], 3) == 0
        if not (unit0 or unit2):
            continue
        bound = strassmann_zero_count(ex["F"], 3, _integral_tail(3))
        per.append({"i": i, "a0_unit": unit0, "a2_unit": unit2, "bound": bound})
    if not per:
        raise ValidationError("unit condition could not be certified")
    return {
        "c": list(C.c),
        "applicable": True,
        "per_differential": per,
        "bound": max(r["bound"] for r in per),
        "assumption": "rank J(Q) <= 1 (not verified)",
    }


def density_bound(n: int) -> Fraction:
    """delta_n >= 1 - 2/(2^n - 1)."""
    return 1 - Fraction(2, 2 ** n - 1)
