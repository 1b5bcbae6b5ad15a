"""
Round spheres and products
==========================

Round spheres S^n with n >= 3 do not have 2 mu in their spectrum, so nearby
solitons are Einstein.  On S^2 x S^2 the eigenspace E(2 mu) consists of
pullbacks of linear functions; all of them are odd under the antipodal map of
each factor, so every cubic integral vanishes.
"""
from soliton_rigidity.manifolds import Sphere, build_E2mu, parse_manifold, weak_rigidity_check
from soliton_rigidity.obstruction import analyze, gram_tensor, kernel_family

for n in (2, 3, 4, 7):
    res = weak_rigidity_check(Sphere(n))
    print(f"S{n}: mu = {Sphere(n).mu}, 2mu = {2 * Sphere(n).mu}, {res.verdict.value}, witness {res.membership.witness}")

###############################################################################
# S^2 x S^2: six basis functions, 56 independent Gram entries, all zero.

d = parse_manifold("S2xS2")
basis = build_E2mu(d)
T = gram_tensor(basis)
print()
print("S2xS2 basis:", ", ".join(basis.labels))
print("Gram entries:", len(T.entries), " nonzero:", len(T.nonzero()))
print("verdict:", analyze(d).verdict.value)

###############################################################################
# S^2 x CP^2: the CP^2 factor is rescaled to the Einstein constant of the
# S^2 factor.  The kernel is the direct sum of the factor kernels: the whole
# S^2 part and nothing from CP^2.

d = parse_manifold("S2xCP2")
print()
print(d.spec(), "factors:", [f.spec() for f in d.factors], "mu =", d.mu)
fam = kernel_family(d)
print("kernel:", fam.kind.value, "-", fam.description)
report = analyze(d)
print("dim E(2mu) =", report.dim_E2mu, " IED dimension:", report.dim_IED, " verdict:", report.verdict.value)
