from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soliton_rigidity.manifolds import FubiniStudy, build_E2mu, parse_manifold
from soliton_rigidity.moments import integrate
from soliton_rigidity.obstruction import (
    SCHEMA,
    GlobalVerdict,
    KernelKind,
    ObstructionStatus,
    analyze,
    diagonal_criterion,
    gram_tensor,
    kernel_family,
    obstruction_check,
    obstruction_check_direct,
)
from soliton_rigidity.poly import hermitian_poly

OBS = ObstructionStatus.OBSTRUCTED
FREE = ObstructionStatus.UNOBSTRUCTED_AT_ORDER_2

frac = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def trace_free(draw, M):
    head = draw(st.lists(frac, min_size=M - 1, max_size=M - 1))
    lam = head + [-sum(head, Fraction(0))]
    if not any(lam):
        lam[0], lam[1] = Fraction(1), Fraction(-1)
    return lam


@pytest.fixture(scope="module")
def cp2():
    basis = build_E2mu(FubiniStudy(2))
    return basis, gram_tensor(basis)


# --- Gram tensor --------------------------------------------------------------


def test_gram_s2xs2_vanishes():
    T = gram_tensor(build_E2mu(parse_manifold("S2xS2")))
    assert len(T.entries) == 56
    assert not T.nonzero()


def test_gram_cp2_golden_entries(cp2):
    basis, T = cp2
    assert len(T.entries) == 8 * 9 * 10 // 6
    k = basis.labels.index("diag(1,1,-2)")
    assert T[k, k, k] == Fraction(-1, 5)
    j = basis.labels.index("diag(1,-1,0)")
    assert T[j, j, k] == Fraction(1, 15)


def test_gram_cp2_phase_mismatch_vanishes(cp2):
    basis, T = cp2
    d = basis.labels.index("diag(1,1,-2)")
    r = basis.labels.index("re(1,3)")
    assert T[d, d, r] == 0


def test_gram_symmetric_and_matches_integrals(cp2):
    basis, T = cp2
    for a, b, c in [(0, 1, 2), (3, 4, 7), (2, 5, 6)]:
        vals = {T[p] for p in permutations((a, b, c))}
        assert vals == {integrate(basis[a] * basis[b] * basis[c])}


# --- per-deformation verdicts -------------------------------------------------


def test_check_cp2_difference(cp2):
    basis, T = cp2
    v = basis.diagonal_coordinates([1, -1, 0])
    res = obstruction_check(v, T)
    assert res.status is OBS
    assert res.witness_label == "diag(1,1,-2)" and res.value == Fraction(1, 15)


def test_check_cp3_balanced():
    basis = build_E2mu(FubiniStudy(3))
    res = obstruction_check_direct(basis.diagonal_coordinates([1, 1, -1, -1]), basis)
    assert res.status is FREE
    assert len(res.pairings) == 15 and not any(res.pairings)


@pytest.mark.parametrize("k", range(6))
def test_check_s2xs2_any_basis_vector(k):
    basis = build_E2mu(parse_manifold("S2xS2"))
    v = [int(i == k) for i in range(6)]
    assert obstruction_check_direct(v, basis).status is FREE


def test_check_rejects_zero(cp2):
    _, T = cp2
    with pytest.raises(ValueError):
        obstruction_check([0] * 8, T)


def test_check_rejects_wrong_length(cp2):
    _, T = cp2
    with pytest.raises(ValueError):
        obstruction_check([1, 0], T)


# --- diagonal criterion -------------------------------------------------------


def test_diagonal_criterion_examples():
    assert diagonal_criterion([1, 1, -2], 2).status is OBS
    assert diagonal_criterion([1, -1], 1).status is FREE
    assert diagonal_criterion([1, 1, -1, -1], 3).status is FREE


def test_diagonal_criterion_rejects_bad_input():
    with pytest.raises(ValueError):
        diagonal_criterion([1, 1, 1], 2)
    with pytest.raises(ValueError):
        diagonal_criterion([1, -1], 2)
    with pytest.raises(ValueError):
        diagonal_criterion([0, 0, 0], 2)


def test_diagonal_criterion_witness_value():
    res = diagonal_criterion([1, 1, -2], 2)
    w = hermitian_poly(res.witness_lam)
    v = hermitian_poly([1, 1, -2])
    assert integrate(v * v * w) == res.value != 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]).flatmap(lambda m: trace_free(m + 1)))
def test_diagonal_criterion_agrees_with_direct_check(lam):
    m = len(lam) - 1
    basis = build_E2mu(FubiniStudy(m))
    direct = obstruction_check_direct(basis.diagonal_coordinates(lam), basis)
    assert diagonal_criterion(lam, m).status is direct.status


@settings(max_examples=60)
@given(st.sampled_from([3, 4, 5]).flatmap(trace_free), st.randoms())
def test_diagonal_criterion_orbit_invariance(lam, rnd):
    m = len(lam) - 1
    base = diagonal_criterion(lam, m).status
    shuffled = list(lam)
    rnd.shuffle(shuffled)
    assert diagonal_criterion(shuffled, m).status is base
    assert diagonal_criterion([-v for v in lam], m).status is base


@settings(max_examples=80)
@given(st.sampled_from([3, 5]).flatmap(trace_free))
def test_odd_coordinate_count_always_obstructed(lam):
    assert diagonal_criterion(lam, len(lam) - 1).status is OBS


# --- kernel families ----------------------------------------------------------


def test_kernel_family_cp4_empty():
    assert kernel_family(FubiniStudy(4)).kind is KernelKind.EMPTY


def test_kernel_family_cp3_representative():
    fam = kernel_family(FubiniStudy(3))
    assert fam.kind is KernelKind.FAMILY
    assert fam.representative_lam == (1, 1, -1, -1)
    basis = build_E2mu(FubiniStudy(3))
    assert obstruction_check_direct(fam.representative, basis).status is FREE


def test_kernel_family_s2xs2_full():
    assert kernel_family(parse_manifold("S2xS2")).kind is KernelKind.FULL


def test_kernel_family_mixed_product():
    fam = kernel_family(parse_manifold("S2xCP2"))
    assert fam.kind is KernelKind.FAMILY
    assert [c.kind for c in fam.components] == [KernelKind.FULL, KernelKind.EMPTY]


# --- reports ------------------------------------------------------------------


def test_analyze_cp4():
    rep = analyze(FubiniStudy(4))
    assert rep.dim_E2mu == 24 and rep.dim_IED == 0 and rep.dim_ISD == 24
    assert rep.verdict is GlobalVerdict.ALL_OBSTRUCTED and rep.rigid


def test_analyze_cp3():
    rep = analyze(FubiniStudy(3))
    assert rep.dim_E2mu == 15
    assert rep.verdict is GlobalVerdict.KERNEL_FAMILY_EXISTS and not rep.rigid
    assert any("undecided beyond order 2" in n for n in rep.notes)


def test_analyze_s2xs2():
    rep = analyze(parse_manifold("S2xS2"))
    assert rep.dim_E2mu == 6
    assert rep.verdict is GlobalVerdict.ALL_UNOBSTRUCTED_AT_ORDER_2 and not rep.rigid


def test_analyze_round_sphere():
    rep = analyze(parse_manifold("S4"))
    assert rep.dim_E2mu == 0 and rep.verdict is GlobalVerdict.NO_CONFORMAL_DEFORMATIONS


def test_analyze_unknown_ied_gives_lower_bound():
    rep = analyze(parse_manifold("S2xCP2"))
    assert rep.dim_IED is None and rep.dim_ISD_lower_bound


def test_report_serialization():
    rep = analyze(FubiniStudy(2))
    text = rep.to_structured_text()
    assert text.splitlines()[0] == f"schema: {SCHEMA}"
    keys = [line.split(":", 1)[0] for line in text.splitlines()]
    assert len(keys) == len(set(keys))
    assert rep.to_csv().splitlines()[0] == "key,value"
