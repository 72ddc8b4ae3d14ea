"""
Exact invariants and numerical zeros
====================================

Integer polynomials carry exact data (discriminant, power sums, the mean of
the zeros) that the floating-point root finder can be checked against.
"""

from equidist import discriminant, find_roots, parse_poly, power_sums
from equidist.families import cyclotomic, kronecker_product

# the discriminant of z^n - 1 is +-n^n
for n in (2, 3, 6, 10):
    p = parse_poly(f"z^{n} - 1")
    print(n, discriminant(p), n**n)

# cyclotomic polynomials come out of the divisor recursion
print(cyclotomic(12))

# a random product of distinct cyclotomic factors: every zero sits on the circle
p = kronecker_product(40, seed=3)
rs = find_roots(p)
print("max |alpha| =", rs.max_modulus, " max error radius =", rs.max_radius)

# Newton's identities give the power sums exactly; compare with the roots
exact = power_sums(p, 5)
numeric = [(rs.values**m).sum() for m in range(1, 6)]
for m, (a, b) in enumerate(zip(exact, numeric), start=1):
    print(m, a, complex(b))
