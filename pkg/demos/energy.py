"""
Energy of the smoothed zero measure
===================================

Spread each zero over a small circle of radius r and subtract arclength
measure on the unit circle.  The resulting signed measure has nonnegative
logarithmic energy, bounded above by exact arithmetic data of the polynomial.
"""

import math

from equidist.energy import SignedDifference, SmoothedMeasure, diagnostics, dirichlet_of_potential
from equidist.families import binomial, kronecker_product
from equidist.roots import find_roots
from equidist.zmeasure import counting_measure

for p in (binomial(8), kronecker_product(32, seed=0), kronecker_product(64, seed=5)):
    n = p.degree
    cm = counting_measure(find_roots(p))
    d = diagnostics(p, cm, r=1 / n)
    print(f"n={n:3d}  I[sigma]={d.energy_sigma:.5f}  bound={d.upper_bound:.5f}")

# the energy is also a Dirichlet integral of the potential, up to 2 pi
p = binomial(4)
sd = SignedDifference(SmoothedMeasure.from_counting(counting_measure(find_roots(p)), 0.1))
d = diagnostics(p, counting_measure(find_roots(p)), 0.1)
print(dirichlet_of_potential(sd, spacing=0.0125, half_width=8.0), 2 * math.pi * d.energy_sigma)
