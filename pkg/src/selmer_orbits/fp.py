"""Polynomials over F_p as int lists (lowest degree first), with distinct- and
equal-degree factorization.  Small and dependency free; used by both the
finite-field census and the p-adic factor-shape code."""

from __future__ import annotations

import random
from typing import Sequence


def trim(a: Sequence[int], p: int) -> list[int]:
    out = [x % p for x in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def deg(a: Sequence[int]) -> int:
    return len(a) - 1


def add(a, b, p):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def sub(a, b, p):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)], p)


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out, p)


def scale(a, c, p):
    return trim([x * c for x in a], p)


def divmod_(a, b, p):
    b = trim(b, p)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = trim(a, p)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        c = r[-1] * inv % p
        s = len(r) - len(b)
        q[s] = c
        for j, y in enumerate(b):
            r[s + j] = (r[s + j] - c * y) % p
        r = trim(r, p)
    return trim(q, p), r


def mod(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    a = trim(a, p)
    if not a:
        return a
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a, b, p):
    a, b = trim(a, p), trim(b, p)
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def xgcd(a, b, p):
    """(g, s, t) with s a + t b = g, g monic."""
    r0, r1 = trim(a, p), trim(b, p)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)


def derivative(a, p):
    return trim([i * a[i] for i in range(1, len(a))], p)


def powmod(base, e, m, p):
    out = [1]
    base = mod(base, m, p)
    while e:
        if e & 1:
            out = mod(mul(out, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return out


def evaluate(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def is_squarefree(a, p) -> bool:
    a = trim(a, p)
    return deg(gcd(a, derivative(a, p), p)) == 0


def squarefree_decomposition(a, p):
    """Return [(g, e)] with a = lc * prod g^e, g squarefree and pairwise coprime.

    Handles p-th powers (derivative zero) as usual for characteristic p.
    """
    a = monic(a, p)
    out: list[tuple[list[int], int]] = []

    def rec(f, mult):
        if deg(f) <= 0:
            return
        d = derivative(f, p)
        if not d:
            # f is a p-th power: f(x) = g(x^p) = g(x)^p over F_p
            g = [f[i] for i in range(0, len(f), p)]
            rec(g, mult * p)
            return
        c = gcd(f, d, p)
        w = divmod_(f, c, p)[0]
        i = 1
        while deg(w) > 0:
            y = gcd(w, c, p)
            z = divmod_(w, y, p)[0]
            if deg(z) > 0:
                out.append((z, i * mult))
            i += 1
            w = y
            c = divmod_(c, y, p)[0]
        if deg(c) > 0:
            rec(c, mult)

    rec(a, 1)
    # merge equal factors of equal multiplicity
    return out


def distinct_degree(a, p):
    """Distinct-degree factorization of a squarefree monic polynomial: [(g_d, d)]."""
    f = monic(a, p)
    out = []
    h = [0, 1]
    d = 0
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, [0, 1], p), p)
        if deg(g) > 0:
            out.append((g, d))
            f = divmod_(f, g, p)[0]
            h = mod(h, f, p)
    if deg(f) > 0:
        out.append((f, deg(f)))
    return out


def equal_degree(f, d, p, rng=None):
    """Split a squarefree monic product of degree-d irreducibles (p odd)."""
    f = monic(f, p)
    if deg(f) == d:
        return [f]
    rng = rng or random.Random(0x5E1)
    while True:
        a = trim([rng.randrange(p) for _ in range(deg(f))], p)
        if deg(a) <= 0:
            continue
        g = gcd(a, f, p)
        if 0 < deg(g) < deg(f):
            break
        b = powmod(a, (p ** d - 1) // 2, f, p)
        g = gcd(sub(b, [1], p), f, p)
        if 0 < deg(g) < deg(f):
            break
    h = divmod_(f, g, p)[0]
    return equal_degree(g, d, p, rng) + equal_degree(h, d, p, rng)


def _brute_irreducible_split(f, p):
    """Fallback for p = 2: trial division by all monic polynomials."""
    out = []
    f = monic(f, p)
    d = 1
    while deg(f) > 0:
        if 2 * d > deg(f):
            out.append(f)
            break
        for tail in range(p ** d):
            g = [(tail // p ** i) % p for i in range(d)] + [1]
            while deg(f) >= d:
                q, r = divmod_(f, g, p)
                if r:
                    break
                out.append(g)
                f = q
        d += 1
    return out


def factor(a, p):
    """Monic irreducible factorization: list of (g, e), sorted for determinism."""
    a = trim(a, p)
    if not a:
        raise ValueError("cannot factor the zero polynomial")
    out = []
    for g, e in squarefree_decomposition(a, p):
        if p == 2:
            pieces = _brute_irreducible_split(g, p)
        else:
            pieces = []
            for h, d in distinct_degree(g, p):
                pieces.extend(equal_degree(h, d, p))
        out.extend((h, e) for h in pieces)
    out.sort(key=lambda t: (deg(t[0]), t[0][::-1], t[1]))
    return out


def factor_degrees(a, p) -> list[int]:
    """Degrees of the irreducible factors, with multiplicity, ascending."""
    return sorted(deg(g) for g, e in factor(a, p) for _ in range(e))


def num_irreducible_factors(a, p) -> int:
    return sum(e for _, e in factor(a, p))


def roots(a, p) -> list[int]:
    return [x for x in range(p) if evaluate(a, x, p) == 0]
