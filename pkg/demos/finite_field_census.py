"""Orbits of SO(3) on V(F_p) for p = 7.

Every separable cubic x^3 + c2 x + c3 mod 7 has a fiber of exactly
#SO(3)(F_7) = 336 points. The fiber breaks into 2^m orbits, each with
stabilizer of order 2^m, where m + 1 is the number of irreducible factors.
"""

from collections import Counter

from selmer_orbits import finite_orbits as fo

p = 7
print(f"#SO(3)(F_{p}) = {fo.so_order(1, p)}")
shapes = Counter()
for c in fo.separable_polys(1, p):
    cen = fo.census_fixed_poly(1, p, c)
    shapes[(cen.m, cen.num_orbits, cen.stabilizer_order)] += 1
    assert cen.ok()

for (m, orbits, stab), count in sorted(shapes.items()):
    print(f"m={m}: {count:3d} cubics, {orbits} orbits each, stabilizers of order {stab}")

print(f"regular vectors: {fo.regular_vector_count(1, p)} of {fo.box_size(1, p)}")
