"""Exact integrals of polynomials over unit spheres and products of spheres.

Every measure here is normalized to total mass 1.  Functions on CP^{M-1}
that come from S^1-invariant polynomials on C^M are integrated on
S^{2M-1}: the Hopf fibration is a Riemannian submersion with fibres of equal
length, so the normalized integral downstairs equals the normalized integral
upstairs.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from .poly import LayoutMismatchError, Poly, Segment


class NonSeparableError(ValueError):
    """A factor of a product integrand does not live on its stated sphere."""


@lru_cache(maxsize=None)
def _complex_moment(M: int, alpha: tuple[int, ...]) -> Fraction:
    # alpha arrives sorted, so permuted keys share one cache slot
    return Fraction(factorial(M - 1) * prod(factorial(a) for a in alpha), factorial(M - 1 + sum(alpha)))


def complex_monomial_moment(M: int, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
    """Normalized integral of ``z^alpha zbar^beta`` over S^{2M-1} in C^M.

    Zero unless ``alpha == beta``; otherwise ``(M-1)! prod(alpha_j!) / (M-1+|alpha|)!``.

    >>> complex_monomial_moment(3, (1, 1, 1), (1, 1, 1))
    Fraction(1, 60)
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    alpha, beta = tuple(alpha), tuple(beta)
    if len(alpha) != M or len(beta) != M:
        raise LayoutMismatchError("exponent vectors must have length M")
    if alpha != beta:
        return Fraction(0)
    return _complex_moment(M, tuple(sorted(alpha)))


@lru_cache(maxsize=None)
def _real_moment(N: int, a: tuple[int, ...]) -> Fraction:
    num = 1
    for k in a:
        num *= prod(range(k - 1, 0, -2))  # (k-1)!!
    half = sum(a) // 2
    den = prod(N + 2 * j for j in range(half))
    return Fraction(num, den)


def real_monomial_moment(N: int, exponents: Sequence[int]) -> Fraction:
    """Normalized integral of ``x^a`` over S^{N-1} in R^N.

    Zero if any exponent is odd, otherwise
    ``prod (a_i - 1)!! / (N (N+2) ... (N + |a| - 2))``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    a = tuple(exponents)
    if len(a) != N:
        raise LayoutMismatchError("exponent vector must have length N")
    if any(k % 2 for k in a):
        return Fraction(0)
    return _real_moment(N, tuple(sorted(a)))


def segment_moment(segment: Segment, exps: Sequence[int]) -> Fraction:
    if segment.kind == "complex":
        M = segment.n
        return complex_monomial_moment(M, exps[:M], exps[M:])
    return real_monomial_moment(segment.n, exps)


def integrate(p: Poly):
    """Integral of ``p`` over the product of the unit spheres of its layout.

    Each monomial is a product of per-segment monomials, so its integral is
    the product of the per-segment moments.
    """
    total = Fraction(0)
    for e, c in p.terms.items():
        m = Fraction(1)
        for seg, ex in p.segment_exponents(e):
            m *= segment_moment(seg, ex)
            if not m:
                break
        if m:
            total = total + c * m
    return total


def integrate_sphere(p: Poly, M: int | None = None):
    """Normalized integral over a single sphere; ``M`` (coordinate count) is
    checked against the polynomial's layout when given."""
    if len(p.layout) != 1:
        raise LayoutMismatchError("integrate_sphere needs a single-segment polynomial")
    if M is not None and p.layout[0].n != M:
        raise LayoutMismatchError(f"polynomial lives on {p.layout[0]}, not {M} coordinates")
    return integrate(p)


def integrate_product(factors: Sequence[tuple[Poly, Segment]]):
    """Integral of ``prod_i pr_i^* p_i`` over the product of spheres ``segment_i``.

    Under the normalized product measure this is the product of the factor
    integrals.
    """
    out = Fraction(1)
    for p, seg in factors:
        seg = Segment(*seg)
        if p.layout != (seg,):
            raise NonSeparableError(f"factor on {p.layout} is not a function on {seg}")
        out = out * integrate(p)
    return out
