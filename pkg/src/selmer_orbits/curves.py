"""Odd-degree hyperelliptic models y^2 = x^(2n+1) + c2 x^(2n-1) + ... + c_(2n+1).

Heights are kept as exact integer powers; no comparison ever goes through a
float.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, total_ordering
from math import gcd, lcm
from typing import Iterator, Sequence

from sympy import factorint

from .exact import Poly, discriminant


def _iroot_floor(a: int, k: int) -> int:
    """floor(a ** (1/k)) for a >= 0, exactly."""
    if a < 2:
        return a
    lo, hi = 1, 1 << (a.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= a:
            lo = mid
        else:
            hi = mid - 1
    return lo


@total_ordering
@dataclass(frozen=True)
class Height:
    """H represented exactly through H ** root = power (both integers)."""

    power: int
    root: int

    def __lt__(self, other):
        if isinstance(other, Height):
            return self.power ** other.root < other.power ** self.root
        return self.power < other ** self.root

    def __eq__(self, other):
        if isinstance(other, Height):
            return self.power ** other.root == other.power ** self.root
        return self.power == other ** self.root

    def __hash__(self):
        return hash((self.power, self.root))

    def exact_value(self):
        """H as an int when it is one, otherwise None."""
        r = _iroot_floor(self.power, self.root)
        return r if r ** self.root == self.power else None

    def __float__(self):
        return float(self.power) ** (1.0 / self.root)


@dataclass(frozen=True)
class HyperCurve:
    n: int
    c: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("genus must be at least 1")
        if len(self.c) != 2 * self.n:
            raise ValueError(f"genus {self.n} needs {2 * self.n} coefficients, got {len(self.c)}")
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))

    @classmethod
    def from_coeffs(cls, c: Sequence[int]) -> "HyperCurve":
        if len(c) % 2:
            raise ValueError("coefficient list must have even length 2n")
        return cls(len(c) // 2, tuple(c))

    @cached_property
    def f(self) -> Poly:
        return Poly.odd_model(self.c)

    def coeff(self, k: int) -> int:
        """c_k for 2 <= k <= 2n+1."""
        return self.c[k - 2]

    @cached_property
    def disc(self) -> int:
        return curve_discriminant(self)

    @cached_property
    def height(self) -> Height:
        return curve_height(self)

    def to_record(self) -> dict:
        h = self.height
        return {
            "n": self.n,
            "c": [str(x) for x in self.c],
            "height_num": str(h.power),
            "height_root": h.root,
            "disc": str(self.disc),
        }

    @classmethod
    def from_record(cls, rec: dict, validate: bool = True) -> "HyperCurve":
        curve = cls(int(rec["n"]), tuple(int(x) for x in rec["c"]))
        if validate and "disc" in rec and str(curve.disc) != str(rec["disc"]):
            raise ValueError(f"corrupt curve record: stored disc {rec['disc']} != {curve.disc}")
        return curve


def _weights(n: int):
    return range(2, 2 * n + 2)


def normalize_indivisible(c: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Divide out the largest u with u^(2m) | c_m for all m."""
    c = tuple(int(x) for x in c)
    if not any(c):
        raise ValueError("all-zero coefficients have no indivisible model")
    g = 0
    for x in c:
        g = gcd(g, x)
    u = 1
    for q in factorint(abs(g)):
        e = min(_val(x, q) // (2 * m) for m, x in zip(range(2, len(c) + 2), c) if x != 0)
        u *= q ** e
    return tuple(x // u ** (2 * m) for m, x in zip(range(2, len(c) + 2), c)), u


def _val(x: int, q: int) -> int:
    v = 0
    while x % q == 0:
        x //= q
        v += 1
    return v


def is_indivisible(c: Sequence[int]) -> bool:
    g = 0
    for x in c:
        g = gcd(g, x)
    if abs(g) == 1:
        return True
    if g == 0:
        return False
    return normalize_indivisible(c)[1] == 1


def curve_height(C: HyperCurve) -> Height:
    """H(C) = max |c_k|^(2n(2n+1)/k), stored as H^L with L = lcm(2..2n+1)."""
    n = C.n
    N = 2 * n * (2 * n + 1)
    L = lcm(*_weights(n))
    power = max(abs(C.coeff(k)) ** (N * L // k) for k in _weights(n))
    return Height(power, L)


def height_below(C: HyperCurve, X: int) -> bool:
    """H(C) < X via |c_k|^(2n(2n+1)) < X^k for every k."""
    N = 2 * C.n * (2 * C.n + 1)
    return all(abs(C.coeff(k)) ** N < X ** k for k in _weights(C.n))


def curve_discriminant(C: HyperCurve) -> int:
    """Delta(C) = 4^(2n) disc(f)."""
    if C.n == 1:
        c2, c3 = C.c
        return 16 * (-4 * c2 ** 3 - 27 * c3 ** 2)
    return 4 ** (2 * C.n) * discriminant(C.f)


def coefficient_bounds(n: int, X: int) -> list[int]:
    """Largest |c_k| with |c_k|^(2n(2n+1)) < X^k, for k = 2..2n+1."""
    N = 2 * n * (2 * n + 1)
    out = []
    for k in _weights(n):
        b = _iroot_floor(X ** k - 1, N) if X ** k > 1 else 0
        out.append(b)
    return out


def enumerate_curves(n: int, X: int, c2_range: range | None = None) -> Iterator[HyperCurve]:
    """All indivisible curves with Delta != 0 and H < X, lexicographically.

    ``c2_range`` restricts the leading coefficient (used to split the work
    across workers); the sub-stream stays ordered.
    """
    if X < 1:
        raise ValueError("height bound must be >= 1")
    bounds = coefficient_bounds(n, X)
    ranges = [range(-b, b + 1) for b in bounds]
    if c2_range is not None:
        ranges[0] = range(max(ranges[0].start, c2_range.start), min(ranges[0].stop, c2_range.stop))

    def rec(prefix, k):
        if k == len(ranges):
            yield tuple(prefix)
            return
        for v in ranges[k]:
            prefix.append(v)
            yield from rec(prefix, k + 1)
            prefix.pop()

    for c in rec([], 0):
        if not any(c) or not is_indivisible(c):
            continue
        C = HyperCurve(n, c)
        if C.disc == 0:
            continue
        yield C


def mod3_chabauty_filter(C: HyperCurve) -> bool:
    """3 does not divide Delta and f(0) = f(1) = f(-1) = -1 mod 3."""
    if C.disc % 3 == 0:
        return False
    f = C.f
    return all(f(x) % 3 == 2 for x in (0, 1, -1))


def f3_affine_points(C: HyperCurve) -> list[tuple[int, int]]:
    """Affine points of C over F_3, by exhaustion."""
    f = C.f
    return [(x, y) for x in range(3) for y in range(3) if (y * y - f(x)) % 3 == 0]


def dump_jsonl(curves, path) -> None:
    with open(path, "w") as fh:
        for C in curves:
            fh.write(json.dumps(C.to_record()) + "\n")


def load_jsonl(path) -> list[HyperCurve]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(HyperCurve.from_record(json.loads(line)))
    return out
