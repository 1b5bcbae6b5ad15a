from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soliton_rigidity.poly import (
    DegreeMismatchError,
    Gaussian,
    LayoutMismatchError,
    Poly,
    complex_layout,
    evaluate,
    flat_laplacian,
    gaussian,
    harmonic_decompose,
    hermitian_poly,
    modsq,
    monomial_basis,
    multiply,
    parse,
    r2,
    real_layout,
    serialize,
    x,
    z,
    zbar,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def bihomogeneous(draw, M=None, k=None):
    M = M or draw(st.integers(2, 4))
    k = draw(st.integers(0, 2)) if k is None else k
    layout = complex_layout(M)
    mons = monomial_basis(layout, (k, k))
    chosen = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=5, unique=True))
    return Poly({e: draw(small) for e in chosen}, layout)


@st.composite
def trace_free(draw, M):
    head = draw(st.lists(small, min_size=M - 1, max_size=M - 1))
    return head + [-sum(head, Fraction(0))]


# --- arithmetic ---------------------------------------------------------------


def test_gaussian_arithmetic():
    a = Gaussian(1, 2)
    b = Gaussian(Fraction(1, 2), -1)
    assert a * b == Gaussian(Fraction(5, 2), 0)
    assert (a / a) == 1
    assert a.conjugate() == Gaussian(1, -2)
    assert gaussian(3, 0) == Fraction(3) and isinstance(gaussian(3, 0), Fraction)


def test_multiply_identity_and_binomial():
    p = modsq(1, 2) - modsq(2, 2)
    one = Poly.const(1, complex_layout(2))
    assert multiply(one, p) == p
    assert multiply(p, p) == modsq(1, 2) ** 2 - 2 * modsq(1, 2) * modsq(2, 2) + modsq(2, 2) ** 2


def test_multiply_bidegrees_add():
    f = modsq(1, 3) - modsq(2, 3)
    assert multiply(f, r2(complex_layout(3))).bidegree() == (2, 2)


def test_multiply_layout_mismatch():
    with pytest.raises(LayoutMismatchError):
        multiply(modsq(1, 2), modsq(1, 3))


def test_no_zero_coefficients_stored():
    p = modsq(1, 2) - modsq(1, 2)
    assert not p and len(p) == 0


# --- Laplacian ----------------------------------------------------------------


def test_laplacian_single_term():
    assert flat_laplacian(modsq(1, 2)) == Poly.const(-4, complex_layout(2))


def test_laplacian_of_square():
    f = hermitian_poly([1, -1, 0])
    assert flat_laplacian(f * f) == -8 * (modsq(1, 3) + modsq(2, 3))


def test_laplacian_of_r4():
    r = r2(complex_layout(3))
    assert flat_laplacian(r * r) == -32 * r


def test_laplacian_real_sign_convention():
    assert flat_laplacian(x(1, 3) ** 2) == Poly.const(-2, real_layout(3))
    assert not flat_laplacian(x(1, 3) * x(2, 3))


@given(bihomogeneous(M=3), bihomogeneous(M=3), small)
def test_laplacian_linear(p, q, c):
    assert flat_laplacian(p + q) == flat_laplacian(p) + flat_laplacian(q)
    assert flat_laplacian(c * p) == c * flat_laplacian(p)


@given(st.data())
def test_laplacian_of_r2_times_p(data):
    p = data.draw(bihomogeneous())
    M = p.layout[0].n
    k, l = p.bidegree()
    r = r2(p.layout)
    assert flat_laplacian(r * p) == r * flat_laplacian(p) - 4 * (M + k + l) * p


@given(st.integers(2, 5).flatmap(trace_free))
def test_laplacian_of_hermitian_square(lam):
    M = len(lam)
    f = hermitian_poly(lam)
    expected = sum((-8 * c * c * modsq(i + 1, M) for i, c in enumerate(lam)), Poly.zero(complex_layout(M)))
    assert flat_laplacian(f * f) == expected


# --- harmonic decomposition ---------------------------------------------------


def test_decompose_single_modsq():
    h, q = harmonic_decompose(modsq(1, 2))
    assert h == Fraction(1, 2) * (modsq(1, 2) - modsq(2, 2))
    assert q == Poly.const(Fraction(1, 2), complex_layout(2))


def test_decompose_harmonic_input():
    p = modsq(1, 3) - modsq(2, 3)
    h, q = harmonic_decompose(p)
    assert h == p and not q


def test_decompose_square_has_nonzero_h11_part():
    f = hermitian_poly([1, 1, -2])
    h, q = harmonic_decompose(f * f)
    assert not flat_laplacian(h)
    assert h + r2(f.layout) * q == f * f
    # H_{1,1} part of q: sum lam_i^2 |z_i|^2 - (sum lam_i^2 / 3) r^2, up to scale
    h1, _ = harmonic_decompose(q)
    target = hermitian_poly([1, 1, 4]) - 2 * r2(f.layout)
    assert h1
    ratio = h1.terms[next(iter(target.terms))] / target.terms[next(iter(target.terms))]
    assert h1 == ratio * target


def test_decompose_constant():
    p = Poly.const(3, complex_layout(2))
    h, q = harmonic_decompose(p)
    assert h == p and not q


def test_decompose_rejects_mixed_bidegree():
    with pytest.raises(DegreeMismatchError):
        harmonic_decompose(modsq(1, 2) + z(1, 2))


@settings(max_examples=40)
@given(bihomogeneous())
def test_decompose_recomposes_and_is_idempotent(p):
    h, q = harmonic_decompose(p)
    assert not flat_laplacian(h)
    assert h + r2(p.layout) * q == p
    if h:
        h2, q2 = harmonic_decompose(h)
        assert h2 == h and not q2


def test_decompose_real_degree_two():
    p = x(1, 3) ** 2
    h, q = harmonic_decompose(p)
    assert not flat_laplacian(h)
    assert h + r2(p.layout) * q == p
    assert q == Poly.const(Fraction(1, 3), real_layout(3))


# --- evaluation ---------------------------------------------------------------


def test_evaluate_r2_on_unit_vector():
    pt = [Fraction(3, 5), Fraction(0), gaussian(0, Fraction(4, 5))]
    assert evaluate(r2(complex_layout(3)), pt) == 1


def test_evaluate_difference():
    assert evaluate(modsq(1, 3) - modsq(2, 3), [1, 0, 0]) == 1


@given(bihomogeneous(M=2, k=1), st.lists(small, min_size=2, max_size=2))
def test_evaluate_homomorphism(f, pt):
    assert evaluate(f * f, pt) == evaluate(f, pt) ** 2


def test_evaluate_length_mismatch():
    with pytest.raises(LayoutMismatchError):
        evaluate(modsq(1, 3), [1, 0])


# --- serialization ------------------------------------------------------------


def test_serialize_canonical_example():
    assert serialize(modsq(1, 2) - modsq(2, 2)) == "1/1*z1*zb1 - 1/1*z2*zb2"


def test_serialize_zero_and_powers():
    assert serialize(Poly.zero(complex_layout(2))) == "0"
    assert serialize(z(1, 2) ** 2) == "1/1*z1^2"


@pytest.mark.parametrize(
    "p",
    [
        hermitian_poly([1, 1, -2]) ** 3,
        Gaussian(0, 1) * (z(1, 3) * zbar(2, 3) - z(2, 3) * zbar(1, 3)),
        x(1, 3) * x(2, 3) - Fraction(2, 7) * x(3, 3) ** 4,
        r2(complex_layout(2)) + Fraction(-1, 3),
    ],
)
def test_serialize_roundtrip(p):
    assert parse(serialize(p), p.layout) == p


def test_serialize_is_order_independent():
    a = modsq(2, 3) + modsq(1, 3)
    b = modsq(1, 3) + modsq(2, 3)
    assert serialize(a) == serialize(b)


def test_real_valued_check():
    re = z(1, 2) * zbar(2, 2) + z(2, 2) * zbar(1, 2)
    assert re.is_real_valued()
    assert not (z(1, 2) * zbar(2, 2)).is_real_valued()
