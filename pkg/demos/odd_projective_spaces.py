"""
The balanced family on CP^3
===========================

With an even number of diagonal entries, lam = (1, 1, -1, -1) has all
lam_i^2 equal and sum zero.  Its square is r^4 plus a harmonic piece of
higher degree, so every cubic pairing with E(2 mu) vanishes.  The second
order test cannot decide these deformations.
"""
from soliton_rigidity.manifolds import FubiniStudy, build_E2mu
from soliton_rigidity.obstruction import analyze, kernel_family, obstruction_check_direct

cp3 = FubiniStudy(3)
basis = build_E2mu(cp3)

fam = kernel_family(cp3)
print("kernel:", fam.kind.value, "-", fam.description)
print("representative lambda:", ",".join(str(c) for c in fam.representative_lam))

res = obstruction_check_direct(fam.representative, basis)
print("status:", res.status.value)
for label, val in zip(basis.labels, res.pairings):
    print(f"  int v^2 {label:14} = {val}")

###############################################################################
# A small perturbation off the family is obstructed again.

res = obstruction_check_direct(basis.diagonal_coordinates([2, 1, -1, -2]), basis)
print()
print("lambda = (2,1,-1,-2):", res.status.value, "witness", res.witness_label, "value", res.value)

report = analyze(cp3)
print()
print("verdict:", report.verdict.value, " rigid:", report.rigid)
for note in report.notes:
    print(" -", note)
