"""From a rational point to an integral orbit, step by step.

C: y^2 = x^3 + 1 with P = (2, 3). The point gives the Mumford pair
(x - 2, 3), the class alpha = 2 - beta of norm 9, an ideal of index 3
in Z[beta], and a unimodular Gram pair whose operator has
characteristic polynomial f. Over Z_5 the pair is moved onto the split
form, giving an integral orbit with the right invariants mod 5^6.
"""

from selmer_orbits.curves import HyperCurve
from selmer_orbits.descent import (
    delta_class,
    divisor_certificate,
    gram_pair,
    ideal_from_divisor,
    integral_orbit_zp,
    invariants_mod,
    local_ideal_census,
    mumford_from_points,
)

C = HyperCurve(1, (0, 1))
pts = [(2, 3)]
D = mumford_from_points(pts, C.f)
print("Mumford pair:", D.P, "|", D.R)

alpha = delta_class(D, C.f)
print("alpha =", alpha.alpha, " norm =", alpha.norm, " square norm:", alpha.norm_is_square())

I = ideal_from_divisor(D, C.f)
print("ideal basis (HNF):", [list(map(str, r)) for r in I.lattice.basis], " index", I.norm)

gp = gram_pair(I, alpha, C.f)
print("Gram matrix:", [list(map(str, r)) for r in gp.G])
print("certificate:", {k: v for k, v in divisor_certificate(C, pts).items() if isinstance(v, bool)})

B = integral_orbit_zp(C, D, 5, 6)
print("integral B mod 5^6:", [list(r) for r in B.B])
print("invariants mod 5^6:", invariants_mod(B))

for p in (3, 5):
    res = local_ideal_census(C.f, alpha, p)
    print(f"local census at {p}: {res['count']} lattice(s), mass {res['mass']}")
