"""Bounding rational points with a 3-adic differential.

Curves passing the mod-3 filter have only the point at infinity over F_3,
so every rational point lies in the residue disc at infinity. Integrating
a regular differential there gives a power series whose Strassmann bound
on 3Z_3 caps the number of rational points, assuming the Mordell-Weil rank
is small (that hypothesis is recorded, not checked).
"""

from collections import Counter

from selmer_orbits import padic
from selmer_orbits.curves import HyperCurve, enumerate_curves, mod3_chabauty_filter

C = HyperCurve(1, (2, 2))
res = padic.chabauty_bound_at_3(C)
print("y^2 = x^3 + 2x + 2:", res)
ex = padic.omega_expansion(C, 0, 10)
print("integrated series coefficients:", [str(a) for a in ex["F"][:8]])

for n, X in [(1, 2000), (2, 300)]:
    hist = Counter(padic.chabauty_bound_at_3(C)["bound"]
                   for C in enumerate_curves(n, X) if mod3_chabauty_filter(C))
    print(f"n={n}, H<{X}: bound histogram {dict(hist)}")

print("density bound for n = 2, 3, 4:", [str(padic.density_bound(n)) for n in (2, 3, 4)])
