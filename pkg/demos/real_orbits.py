"""Real orbits with a fixed characteristic polynomial, told apart by signs.

For x^5 - 5x^3 + 4x (roots -2, -1, 0, 1, 2) there are C(5, 2) = 10 real
orbits. Only the first 2^m = 4 of them come from soluble classes; the
distinguished orbit is the first one.
"""

from selmer_orbits.exact import Poly
from selmer_orbits.orbit_rep import (
    all_patterns,
    classify_component,
    distinguished_rep,
    real_component,
    sign_pattern,
)

f = Poly.from_roots([-2, -1, 0, 1, 2])
m = real_component(f)
print("f =", f, " m =", m)

B = distinguished_rep(f)
print("distinguished representative:")
for row in B.matrix():
    print("   ", " ".join(f"{str(x):>6}" for x in row))
print("sign pattern:", sign_pattern(B), " (m, tau) =", classify_component(sign_pattern(B)))

for tau, pat in enumerate(all_patterns(m), start=1):
    tag = "soluble" if tau <= 2 ** m else ""
    print(f"  tau={tau:2d}  {pat}  {tag}")
