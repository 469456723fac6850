"""Exhaustive orbit censuses for SO(W) acting on V over F_p (p odd).

Everything is vectorized with numpy over batches of matrices.  A point of
V(F_p) is encoded as an integer in [0, p^N) via its N = n(2n+3) free
coordinates b_ij (i <= j, skipping the middle diagonal entry, which is fixed
by the anti-trace condition).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, asdict
from math import prod

import numpy as np

from . import fp
from .errors import Infeasible, ValidationError
from .orbit_rep import distinguished_rep, root_element, torus_element

MAX_BOX = 5_000_000
CHUNK = 1 << 18


def so_order(n: int, q: int) -> int:
    """#SO(2n+1)(F_q) = q^(n^2) prod_{i=1..n} (q^(2i) - 1)."""
    return q ** (n * n) * prod(q ** (2 * i) - 1 for i in range(1, n + 1))


def _check_prime(p: int):
    if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, int(p ** 0.5) + 1, 2)):
        raise ValidationError(f"p must be an odd prime, got {p}")


def free_coords(n: int) -> list[tuple[int, int]]:
    """0-indexed (i, j), i <= j, excluding (n, n)."""
    d = 2 * n + 1
    return [(i, j) for i in range(d) for j in range(i, d) if (i, j) != (n, n)]


def box_size(n: int, p: int) -> int:
    return p ** (n * (2 * n + 3))


def _check_feasible(n: int, p: int):
    if box_size(n, p) > MAX_BOX:
        raise Infeasible(f"V(F_{p}) for n={n} has {box_size(n, p)} points; limit is {MAX_BOX}")


# ---------------------------------------------------------------------------
# encoding

def decode(codes: np.ndarray, n: int, p: int) -> np.ndarray:
    """Codes -> batch of symmetric matrices (k, d, d) with entries in [0, p)."""
    d = 2 * n + 1
    coords = free_coords(n)
    codes = np.asarray(codes, dtype=np.int64)
    B = np.zeros((len(codes), d, d), dtype=np.int64)
    rest = codes.copy()
    for i, j in coords:
        v = rest % p
        rest //= p
        B[:, i, j] = v
        B[:, j, i] = v
    anti = sum(B[:, i, d - 1 - i] for i in range(n))
    B[:, n, n] = (-2 * anti) % p
    return B


def encode(B: np.ndarray, n: int, p: int) -> np.ndarray:
    codes = np.zeros(B.shape[0], dtype=np.int64)
    mult = 1
    for i, j in free_coords(n):
        codes += (B[:, i, j] % p) * mult
        mult *= p
    return codes


# ---------------------------------------------------------------------------
# batched invariants

def batch_charpoly(T: np.ndarray, p: int) -> np.ndarray:
    """Characteristic polynomials of a batch of integer matrices, reduced mod p.

    Exact Faddeev-LeVerrier over Z on centered residues (the divisions by k are
    exact over Z, so this is valid for every p).  Returns (k, d+1) coefficient
    arrays, highest degree first, so row[0] = 1.
    """
    k, d, _ = T.shape
    T = np.where(T > p // 2, T - p, T).astype(np.int64)
    out = np.zeros((k, d + 1), dtype=np.int64)
    out[:, 0] = 1
    eye = np.eye(d, dtype=np.int64)
    N = np.broadcast_to(eye, T.shape)
    for step in range(1, d + 1):
        Mk = T @ N
        c = -np.trace(Mk, axis1=1, axis2=2) // step
        out[:, step] = c
        N = Mk + c[:, None, None] * eye
    return out % p


def operator_batch(B: np.ndarray) -> np.ndarray:
    """T = A B: reverse the rows."""
    return B[:, ::-1, :]


def invariant_codes(B: np.ndarray, n: int, p: int) -> np.ndarray:
    """Encode (c2, ..., c_(2n+1)) of each matrix as an integer base p."""
    cp = batch_charpoly(operator_batch(B), p)
    codes = np.zeros(len(B), dtype=np.int64)
    mult = 1
    for k in range(2, 2 * n + 2):
        codes += cp[:, k] * mult
        mult *= p
    return codes


def poly_code(c, p: int) -> int:
    code, mult = 0, 1
    for x in c:
        code += (x % p) * mult
        mult *= p
    return code


def poly_from_code(code: int, n: int, p: int) -> tuple[int, ...]:
    out = []
    for _ in range(2 * n):
        out.append(code % p)
        code //= p
    return tuple(out)


def batch_rank_mod_p(X: np.ndarray, p: int) -> np.ndarray:
    """Row rank of each (r, c) matrix in a batch, by Gaussian elimination mod p."""
    X = X.copy() % p
    k, r, c = X.shape
    rank = np.zeros(k, dtype=np.int64)
    rows = np.arange(r)
    idx = np.arange(k)
    inv = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
    for col in range(c):
        cand = (X[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        sel = idx[has]
        pr, rr = piv[has], rank[has]
        a, b = X[sel, pr].copy(), X[sel, rr].copy()
        X[sel, rr], X[sel, pr] = a, b
        prow = X[sel, rr] * inv[X[sel, rr, col]][:, None] % p
        X[sel, rr] = prow
        factors = X[sel, :, col].copy()
        factors[np.arange(len(sel)), rr] = 0
        X[sel] = (X[sel] - factors[:, :, None] * prow[:, None, :]) % p
        rank[has] += 1
        if np.all(rank == r):
            break
    return rank


def is_regular_batch(B: np.ndarray, n: int, p: int) -> np.ndarray:
    """T = A B is regular iff I, T, ..., T^(2n) are linearly independent."""
    T = operator_batch(B) % p
    k, d, _ = T.shape
    powers = np.empty((k, d, d * d), dtype=np.int64)
    P = np.broadcast_to(np.eye(d, dtype=np.int64), (k, d, d)).copy()
    for e in range(d):
        powers[:, e] = P.reshape(k, d * d)
        P = (P @ T) % p
    return batch_rank_mod_p(powers, p) == d


def distinguished_shape_batch(B: np.ndarray, n: int) -> np.ndarray:
    d = 2 * n + 1
    mask = np.add.outer(np.arange(d), np.arange(d)) < d - 2
    return ~np.any(B[:, mask] != 0, axis=1)


# ---------------------------------------------------------------------------
# the group

def so_generators(n: int, p: int) -> list[np.ndarray]:
    """Simple and negative simple root elements x_a(1), plus a torus element
    built from a primitive root (it has nonsquare spinor norm, so together with
    the root elements it reaches all of SO(W)(F_p))."""
    _check_prime(p)
    gens = []
    simple = [(i, i + 1) for i in range(n - 1)] + [(n - 1, n)]
    for i, j in simple:
        gens.append(root_element(n, i, j, 1, modulus=p))
        gens.append(root_element(n, j, i, 1, modulus=p))
    t = primitive_root(p)
    for k in range(n):
        ts = [1] * n
        ts[k] = t
        gens.append(torus_element(n, ts, modulus=p))
    return [np.array(g, dtype=np.int64) % p for g in gens]


def primitive_root(p: int) -> int:
    qs = [q for q in range(2, p) if (p - 1) % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    return 1  # p = 2, unused


def enumerate_group(n: int, p: int, limit: int = 200_000) -> np.ndarray:
    """All elements of the group generated by so_generators, by BFS."""
    gens = np.stack(so_generators(n, p))
    d = 2 * n + 1
    identity = np.eye(d, dtype=np.int64)[None]
    seen = {identity.tobytes()}
    elems = [identity]
    frontier = identity
    while len(frontier):
        prods = (frontier[:, None] @ gens[None]) % p
        prods = prods.reshape(-1, d, d)
        new = []
        for g in prods:
            key = g.tobytes()
            if key not in seen:
                seen.add(key)
                new.append(g)
        if len(seen) > limit:
            raise Infeasible(f"group exceeds {limit} elements")
        frontier = np.array(new, dtype=np.int64).reshape(-1, d, d)
        if len(frontier):
            elems.append(frontier)
    return np.concatenate(elems)


def act_batch(g: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """g^T B g for one g and a batch of B."""
    return (g.T[None] @ B @ g[None]) % p


def orbit_codes(start_code: int, n: int, p: int, gens: list[np.ndarray]) -> np.ndarray:
    """Orbit of one point under the generated group, as a sorted code array."""
    seen = np.array([start_code], dtype=np.int64)
    frontier = seen
    while len(frontier):
        B = decode(frontier, n, p)
        images = np.concatenate([encode(act_batch(g, B, p), n, p) for g in gens])
        images = np.unique(images)
        new = np.setdiff1d(images, seen, assume_unique=True)
        seen = np.union1d(seen, new)
        frontier = new
    return seen


def stabilizer_order(B: np.ndarray, group: np.ndarray, p: int) -> int:
    """Brute force: #{g : g^T B g = B}."""
    imgs = (np.transpose(group, (0, 2, 1)) @ B[None] @ group) % p
    return int(np.all(imgs == B[None] % p, axis=(1, 2)).sum())


# ---------------------------------------------------------------------------
# censuses

def iter_box(n: int, p: int, chunk: int = CHUNK):
    """Yield (codes, matrices) chunks covering all of V(F_p)."""
    total = box_size(n, p)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield codes, decode(codes, n, p)


def fiber_codes(n: int, p: int, c) -> np.ndarray:
    """All points of V(F_p) with invariants c, by exhaustion."""
    _check_feasible(n, p)
    target = poly_code(c, p)
    parts = []
    for codes, B in iter_box(n, p):
        parts.append(codes[invariant_codes(B, n, p) == target])
    return np.concatenate(parts)


def all_fibers(n: int, p: int) -> dict[int, np.ndarray]:
    """Partition V(F_p) by invariants: poly code -> sorted point codes."""
    _check_feasible(n, p)
    inv_all = []
    for codes, B in iter_box(n, p):
        inv_all.append(invariant_codes(B, n, p))
    inv_all = np.concatenate(inv_all)
    order = np.argsort(inv_all, kind="stable")
    keys, starts = np.unique(inv_all[order], return_index=True)
    bounds = list(starts) + [len(order)]
    return {int(k): order[bounds[i]:bounds[i + 1]].astype(np.int64) for i, k in enumerate(keys)}


def trace_zero_poly(c, p: int) -> list[int]:
    """Coefficient list (lowest first) of x^(2n+1) + c2 x^(2n-1) + ... mod p."""
    d = len(c) + 1
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    for k, ck in enumerate(c, start=2):
        coeffs[d - k] = ck % p
    return coeffs


def separable_mod_p(c, p: int) -> bool:
    return fp.is_squarefree(trace_zero_poly(c, p), p)


@dataclass
class OrbitCensus:
    n: int
    p: int
    f: tuple
    total: int
    orbit_sizes: list
    stabilizer_orders: list
    num_orbits: int
    distinguished_size: int
    distinguished_orbits: int
    m: int
    expected: dict = field(default_factory=dict)

    @property
    def orbit_size(self) -> int:
        return self.orbit_sizes[0]

    @property
    def stabilizer_order(self) -> int:
        return self.stabilizer_orders[0]

    def ok(self) -> bool:
        so = so_order(self.n, self.p)
        return (
            self.total == so
            and self.num_orbits == 2 ** self.m
            and all(s == 2 ** self.m for s in self.stabilizer_orders)
            and all(o * s == so for o, s in zip(self.orbit_sizes, self.stabilizer_orders))
            and self.distinguished_orbits == 1
            and self.distinguished_size == so // 2 ** self.m
        )

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["f"] = [str(x) for x in self.f]
        rec["orbit_size"] = self.orbit_size
        rec["stabilizer_order"] = self.stabilizer_order
        rec["ok"] = self.ok()
        return rec


def census_from_fiber(n: int, p: int, c, codes: np.ndarray, gens=None, group=None) -> OrbitCensus:
    """Split a fiber into orbits, compute stabilizers and locate the distinguished orbit."""
    gens = gens if gens is not None else so_generators(n, p)
    group = group if group is not None else enumerate_group(n, p)
    remaining = np.sort(codes)
    sizes, stabs, dist_flags = [], [], []
    while len(remaining):
        orb = orbit_codes(int(remaining[0]), n, p, gens)
        if not np.all(np.isin(orb, codes)):
            raise AssertionError("orbit left its fiber; generators do not preserve invariants")
        remaining = np.setdiff1d(remaining, orb, assume_unique=True)
        sizes.append(len(orb))
        rep = decode(orb[:1], n, p)[0]
        stabs.append(stabilizer_order(rep, group, p))
        dist_flags.append(bool(distinguished_shape_batch(decode(orb, n, p), n).any()))
    m = fp.num_irreducible_factors(trace_zero_poly(c, p), p) - 1
    dist_sizes = [s for s, fl in zip(sizes, dist_flags) if fl]
    return OrbitCensus(
        n=n, p=p, f=tuple(int(x) % p for x in c), total=int(len(codes)),
        orbit_sizes=sizes, stabilizer_orders=stabs, num_orbits=len(sizes),
        distinguished_size=dist_sizes[0] if dist_sizes else 0,
        distinguished_orbits=len(dist_sizes), m=m,
        expected={"so_order": so_order(n, p), "orbits": 2 ** m, "stabilizer": 2 ** m},
    )


def census_fixed_poly(n: int, p: int, c) -> OrbitCensus:
    """Full census of the fiber of V(F_p) above trace-zero f with coefficients c."""
    _check_prime(p)
    if len(c) != 2 * n:
        raise ValidationError(f"need {2 * n} coefficients")
    if not separable_mod_p(c, p):
        raise ValidationError("f is inseparable mod p")
    _check_feasible(n, p)
    codes = fiber_codes(n, p, c)
    census = census_from_fiber(n, p, c, codes)
    # the explicit distinguished representative must land in the distinguished orbit
    from .exact import Poly
    D = distinguished_rep(Poly.odd_model([int(x) for x in c]), p)
    dcode = int(encode(np.array([D.B], dtype=np.int64), n, p)[0])
    if dcode not in set(codes.tolist()):
        raise AssertionError("distinguished representative is not in the fiber")
    return census


def regular_vector_count(n: int, p: int) -> int:
    """Exhaustive count of regular points of V(F_p)."""
    _check_prime(p)
    _check_feasible(n, p)
    total = 0
    for _, B in iter_box(n, p, chunk=1 << 16):
        total += int(is_regular_batch(B, n, p).sum())
    return total


def separable_polys(n: int, p: int) -> list[tuple[int, ...]]:
    out = []
    for code in range(p ** (2 * n)):
        c = poly_from_code(code, n, p)
        if separable_mod_p(c, p):
            out.append(c)
    return out


def reducible_poly_density(n: int, p: int) -> tuple[int, int]:
    """(# reducible separable, # separable) trace-zero monic polys of degree 2n+1 mod p.

    Pure polynomial counting, so p = 2 is allowed here.
    """
    if p != 2:
        _check_prime(p)
    if p ** (2 * n) > MAX_BOX:
        raise Infeasible("too many polynomials")
    red = tot = 0
    for code in range(p ** (2 * n)):
        c = poly_from_code(code, n, p)
        f = trace_zero_poly(c, p)
        if not fp.is_squarefree(f, p):
            continue
        tot += 1
        if fp.num_irreducible_factors(f, p) > 1:
            red += 1
    return red, tot


def full_census(n: int, p: int, with_orbits: bool = True) -> dict:
    """Census of every separable fiber; returns the per-fiber records plus totals."""
    _check_prime(p)
    fibers = all_fibers(n, p)
    gens = so_generators(n, p) if with_orbits else None
    group = enumerate_group(n, p) if with_orbits else None
    so = so_order(n, p)
    records = []
    by_m = defaultdict(int)
    for code in range(p ** (2 * n)):
        c = poly_from_code(code, n, p)
        if not separable_mod_p(c, p):
            continue
        codes = fibers.get(poly_code(c, p), np.zeros(0, dtype=np.int64))
        if with_orbits:
            cen = census_from_fiber(n, p, c, codes, gens, group)
            records.append(cen)
            by_m[cen.m] += 1
        else:
            records.append(OrbitCensus(n, p, c, int(len(codes)), [], [], 0, 0, 0, -1))
    return {
        "n": n, "p": p, "so_order": so, "num_separable": len(records),
        "fiber_totals_ok": all(r.total == so for r in records),
        "orbits_ok": all(r.ok() for r in records) if with_orbits else None,
        "separable_points": sum(r.total for r in records),
        "by_m": dict(sorted(by_m.items())),
        "records": records,
    }
