"""
Every deformation of CP^2 and CP^4 is obstructed
================================================

On CP^m the eigenspace E(2 mu) is the space of trace-free Hermitian forms.
A deformation v is obstructed at second order when some w in E(2 mu) has
``int v^2 w != 0``.  Unitary invariance reduces v to a diagonal form
``sum lam_i |z_i|^2``, and the pairing vanishes for all w only when every
lam_i^2 is the same, which is impossible with an odd number of entries
summing to zero.
"""
from soliton_rigidity.manifolds import FubiniStudy, build_E2mu
from soliton_rigidity.obstruction import analyze, diagonal_criterion, gram_tensor, obstruction_check

cp2 = FubiniStudy(2)
basis = build_E2mu(cp2)
print("CP2: mu =", cp2.mu, " dim E(2mu) =", len(basis))
print("basis:", ", ".join(basis.labels))

T = gram_tensor(basis)
print(f"Gram tensor: {len(T.entries)} independent entries, {len(T.nonzero())} nonzero")

###############################################################################
# The deformation with lam = (1, -1, 0) pairs nontrivially with diag(1,1,-2).

v = basis.diagonal_coordinates([1, -1, 0])
verdict = obstruction_check(v, T)
print()
print("v = diag(1,-1,0):", verdict.status.value, "witness", verdict.witness_label, "value", verdict.value)

###############################################################################
# The closed-form criterion on a few diagonal deformations.

for lam in ([1, 1, -2], [3, -1, -2], [2, -1, -1]):
    res = diagonal_criterion(lam, 2)
    print(f"lam = {lam}: {res.status.value}, witness lam = {[str(c) for c in res.witness_lam]}, value {res.value}")

###############################################################################
# The full report for CP^4.  The final rigidity statement quotes a theorem on
# finite-order integrability; the computation certifies only its hypothesis.

print()
print(analyze(FubiniStudy(4)).to_structured_text())
