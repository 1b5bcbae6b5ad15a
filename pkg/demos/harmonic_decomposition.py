"""
Harmonic decomposition on C^3
=============================

Eigenfunctions of CP^m at the first nonzero eigenvalue are the bidegree (1,1)
harmonic polynomials on C^{m+1}.  Squaring one leaves that space, and the
way the square splits into harmonic pieces is what drives the cubic
obstruction.  Everything below is exact.
"""
from soliton_rigidity.poly import complex_layout, flat_laplacian, harmonic_decompose, hermitian_poly, r2, serialize

# f = |z1|^2 + |z2|^2 - 2|z3|^2 is trace-free, hence flat-harmonic
f = hermitian_poly([1, 1, -2])
print("f          =", serialize(f))
print("Delta f    =", serialize(flat_laplacian(f)))

# the Laplacian of f^2 only sees the squared diagonal entries
sq = f * f
print("Delta f^2  =", serialize(flat_laplacian(sq)))

# compare with r^4, whose Laplacian is a multiple of r^2
rr = r2(complex_layout(3))
print("Delta r^4  =", serialize(flat_laplacian(rr * rr)))

###############################################################################
# Split f^2 = h + r^2 q with h harmonic, then split q again.  The harmonic
# part of q is the piece of f^2 that lives in the first eigenspace; it is
# nonzero exactly when the lambda_i^2 are not all equal.

h, q = harmonic_decompose(sq)
h1, q1 = harmonic_decompose(q)
print()
print("h   =", serialize(h))
print("q   =", serialize(q))
print("H11 part of q =", serialize(h1))
print("recomposes:", h + rr * q == sq)

# with lambda = (1, 1, -1, -1) every lambda_i^2 agrees and the H11 part vanishes
g = hermitian_poly([1, 1, -1, -1])
_, qg = harmonic_decompose(g * g)
print("balanced H11 part on C^4:", serialize(harmonic_decompose(qg).harmonic))
