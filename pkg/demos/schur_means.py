"""
Means of zeros with bounded leading coefficient
===============================================

For polynomials with simple zeros in the closed disk and ``|a_n| <= M``, the
mean of the zeros tends to 0 at rate ``8 sqrt(log n / n)`` once ``n >= max(M, 55)``.
"""

from equidist.bounds import schur_mean_report
from equidist.families import schur_sample
from equidist.roots import find_roots

M = 10
print(f"{'n':>5} {'|s_n|':>10} {'8 sqrt(log n / n)':>18}  exact mean")
for n in (55, 100, 200, 400):
    p = schur_sample(n, M, seed=0)
    rep = schur_mean_report(p, find_roots(p), M)
    print(f"{n:5d} {rep.lhs:10.2e} {rep.rhs:18.4f}  {rep.inputs['mean_exact']}")

# the same sweep from the shell:
#   equidist sweep --family schur --M 10 --n 55,100,200,400 --format csv
