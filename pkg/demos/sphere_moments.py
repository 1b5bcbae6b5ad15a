"""
Exact sphere moments against Monte-Carlo
========================================

All integrals use the normalized measure (total mass 1).  A function on CP^m
coming from an S^1-invariant polynomial is integrated on S^{2m+1}; the Hopf
map has fibres of equal length, so the normalized values agree.
"""
from fractions import Fraction

from soliton_rigidity.moments import complex_monomial_moment, integrate_sphere, real_monomial_moment
from soliton_rigidity.poly import hermitian_poly, modsq, x
from soliton_rigidity.verify import McConfig, mc_integrate

print("|z1|^2 on S^3        ", complex_monomial_moment(2, (1, 0), (1, 0)))
print("|z1 z2 z3|^2 on S^5  ", complex_monomial_moment(3, (1, 1, 1), (1, 1, 1)))
print("x1^4 on S^2          ", real_monomial_moment(3, (4, 0, 0)))

###############################################################################
# Two cubic integrals on CP^2 that show up again in the obstruction demos.

u = hermitian_poly([1, 1, -2])
v = hermitian_poly([1, -1, 0])
cases = [
    ("|z1|^2", modsq(1, 2), integrate_sphere(modsq(1, 2))),
    ("u^3", u**3, integrate_sphere(u**3)),
    ("v^2 u", v * v * u, integrate_sphere(v * v * u)),
    ("x1^4", x(1, 3) ** 4, Fraction(1, 5)),
]

cfg = McConfig(samples=1_000_000, seed=0)
print()
print(f"{'integrand':10} {'exact':>7} {'estimate':>10} {'stderr':>9}  within 4 sigma")
for name, p, exact in cases:
    est = mc_integrate(p, cfg=cfg)
    print(f"{name:10} {str(exact):>7} {est.estimate:10.6f} {est.stderr:9.1e}  {est.agrees(exact)}")
