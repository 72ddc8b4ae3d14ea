"""
Zeros in sectors
================

Count zeros in the 16 dyadic sectors and compare the worst discrepancy with
the sector bound ``16 sqrt((1/n) log(||P|| / sqrt|a_0 a_n|))``.
"""

from equidist.bounds import erdos_turan_rhs, sup_norm
from equidist.families import binomial, schur_sample
from equidist.roots import find_roots
from equidist.zmeasure import counting_measure, dyadic_sectors, sector_discrepancy

sectors = dyadic_sectors(4)

print(f"{'family':8} {'n':>5} {'discrepancy':>12} {'bound':>8}")
for n in (16, 64, 256):
    for name, p in (("binomial", binomial(n)), ("schur", schur_sample(n, 10, seed=1))):
        cm = counting_measure(find_roots(p))
        worst = max(sector_discrepancy(cm, a, b) for a, b in sectors)
        print(f"{name:8} {n:5d} {worst:12.5f} {erdos_turan_rhs(p, sup_norm(p)):8.3f}")

# the bound is far from tight for z^n - 1, whose discrepancy is at most 2/n
