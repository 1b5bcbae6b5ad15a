"""Model Einstein manifolds, their Laplace spectra and the eigenspace E(2 mu).

Conventions
-----------
* ``Sphere(n, scale)`` is the round S^n with metric ``scale * g_unit``
  (so ``scale`` is the squared radius).  mu = (n-1)/scale, spectrum
  k(k+n-1)/scale.
* ``FubiniStudy(m, scale)`` is CP^m with ``scale`` times the metric making
  S^{2m+1}(1) -> CP^m a Riemannian submersion.  mu = 2(m+1)/scale,
  spectrum 4k(k+m)/scale.
* ``Product`` stores factors already rescaled to a common Einstein constant.

Eigenvalues scale inversely with the metric.  Every verdict downstream is
scale-invariant; only the reported values of mu depend on the convention.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Sequence, Union

import numpy as np

from .poly import (
    I,
    Gaussian,
    Poly,
    Segment,
    conj,
    flat_laplacian,
    hermitian_poly,
    solve_exact,
    x,
    z,
    zbar,
)


class ManifoldSpecError(ValueError):
    """Manifold spec string does not parse."""


class UnsupportedManifoldError(ValueError):
    """Manifold parses but lies outside what the library can construct."""


class UnsupportedCrossTermsError(UnsupportedManifoldError):
    """E(2 mu) of a product would need products of factor eigenfunctions."""


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sphere:
    n: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.n < 2:
            raise UnsupportedManifoldError("Sphere needs intrinsic dimension n >= 2")
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0:
            raise UnsupportedManifoldError("scale must be positive")

    @classmethod
    def with_radius(cls, n: int, radius) -> "Sphere":
        r = Fraction(radius)
        return cls(n, r * r)

    @property
    def real_dim(self) -> int:
        return self.n

    @property
    def mu(self) -> Fraction:
        return Fraction(self.n - 1) / self.scale

    @property
    def tau(self) -> Fraction:
        return 1 / (2 * self.mu)

    @property
    def segment(self) -> Segment:
        return Segment("real", self.n + 1)

    @property
    def factors(self) -> tuple:
        return (self,)

    def eigenvalue(self, k: int) -> Fraction:
        return Fraction(k * (k + self.n - 1)) / self.scale

    def rescaled(self, factor) -> "Sphere":
        return Sphere(self.n, self.scale * Fraction(factor))

    def spec(self) -> str:
        if self.scale == 1:
            return f"S{self.n}"
        num, den = isqrt(self.scale.numerator), isqrt(self.scale.denominator)
        if num * num == self.scale.numerator and den * den == self.scale.denominator:
            return f"S{self.n}(r={Fraction(num, den)})"
        return f"S{self.n}(r^2={self.scale})"


@dataclass(frozen=True)
class FubiniStudy:
    m: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.m < 1:
            raise UnsupportedManifoldError("CP^m needs m >= 1")
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0:
            raise UnsupportedManifoldError("scale must be positive")

    @property
    def real_dim(self) -> int:
        return 2 * self.m

    @property
    def mu(self) -> Fraction:
        return Fraction(2 * (self.m + 1)) / self.scale

    @property
    def tau(self) -> Fraction:
        return 1 / (2 * self.mu)

    @property
    def segment(self) -> Segment:
        return Segment("complex", self.m + 1)

    @property
    def factors(self) -> tuple:
        return (self,)

    def eigenvalue(self, k: int) -> Fraction:
        return Fraction(4 * k * (k + self.m)) / self.scale

    def rescaled(self, factor) -> "FubiniStudy":
        return FubiniStudy(self.m, self.scale * Fraction(factor))

    def spec(self) -> str:
        if self.scale == 1:
            return f"CP{self.m}"
        return f"CP{self.m}(scale={self.scale})"


Factor = Union[Sphere, FubiniStudy]


@dataclass(frozen=True)
class Product:
    """Riemannian product whose factors share one Einstein constant."""

    factors: tuple

    def __post_init__(self):
        flat = []
        for f in self.factors:
            flat.extend(f.factors)
        if len(flat) < 2:
            raise UnsupportedManifoldError("a product needs at least two factors")
        object.__setattr__(self, "factors", tuple(flat))
        mus = {f.mu for f in flat}
        if len(mus) != 1:
            raise UnsupportedManifoldError(f"factors have different Einstein constants {sorted(mus)}")

    @classmethod
    def of(cls, *factors: Factor) -> "Product":
        """Rescale every factor to the Einstein constant of the first one."""
        flat = [g for f in factors for g in f.factors]
        mu = flat[0].mu
        return cls(tuple(f.rescaled(f.mu / mu) for f in flat))

    @property
    def real_dim(self) -> int:
        return sum(f.real_dim for f in self.factors)

    @property
    def mu(self) -> Fraction:
        return self.factors[0].mu

    @property
    def tau(self) -> Fraction:
        return 1 / (2 * self.mu)

    def spec(self) -> str:
        """Factor list in the parse grammar; only the first factor carries its
        scale since the others are rescaled to match it."""
        first, *rest = self.factors
        return "x".join([first.spec()] + [type(f)(f.n if isinstance(f, Sphere) else f.m).spec() for f in rest])


Manifold = Union[Sphere, FubiniStudy, Product]


def layout_of(d: Manifold) -> tuple[Segment, ...]:
    return tuple(f.segment for f in d.factors)


def ied_dimension(d: Manifold) -> int | None:
    """Known dimension of the infinitesimal Einstein deformations, else None.

    Round spheres and CP^m carry none; neither does S^2 x S^2.  Other
    products are left unknown (S^2 x CP^{2n} is known to have some).
    """
    if isinstance(d, (Sphere, FubiniStudy)):
        return 0
    if len(d.factors) == 2 and all(isinstance(f, Sphere) and f.n == 2 for f in d.factors):
        return 0
    return None


# ---------------------------------------------------------------------------
# Spec mini-language
# ---------------------------------------------------------------------------

_FACTOR_RE = re.compile(r"^(?:S(\d+)(?:\(r=([0-9/]+)\))?|CP(\d+))$")


def parse_manifold(text: str) -> Manifold:
    """Parse ``S2``, ``S3(r=1)``, ``CP4``, ``S2xS2``, ``S2xCP4`` ...

    Products are rescaled so that all factors share the Einstein constant
    of the first factor.
    """
    text = text.strip()
    if not text:
        raise ManifoldSpecError("empty manifold spec")
    pieces = text.split("x")
    factors = []
    for piece in pieces:
        m = _FACTOR_RE.match(piece)
        if not m:
            raise ManifoldSpecError(f"cannot parse factor {piece!r} in {text!r}")
        if m.group(3) is not None:
            factors.append(FubiniStudy(int(m.group(3))))
        else:
            try:
                r = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            except (ValueError, ZeroDivisionError) as exc:
                raise ManifoldSpecError(f"bad radius in {piece!r}") from exc
            factors.append(Sphere.with_radius(int(m.group(1)), r))
    if len(factors) == 1:
        return factors[0]
    return Product.of(*factors)


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumMembership:
    contains: bool
    witnesses: tuple[tuple[int, ...], ...] = ()
    eigenvalues: tuple[tuple[Fraction, ...], ...] = ()

    @property
    def witness(self) -> tuple[int, ...] | None:
        return self.witnesses[0] if self.witnesses else None

    def __bool__(self):
        return self.contains


def _levels_up_to(f: Factor, value: Fraction) -> list[tuple[int, Fraction]]:
    out, k = [], 0
    while True:
        ev = f.eigenvalue(k)
        if ev > value:
            return out
        out.append((k, ev))
        k += 1


def spectrum_contains(d: Manifold, value) -> SpectrumMembership:
    """Is ``value`` a Laplace eigenvalue of ``d``?

    Product spectra are sums of factor eigenvalues; only factor levels not
    exceeding ``value`` are enumerated, so the search is finite and exact.
    Witnesses are tuples of per-factor levels k.
    """
    value = Fraction(value)
    if value < 0:
        return SpectrumMembership(False)
    per_factor = [_levels_up_to(f, value) for f in d.factors]
    hits, evs = [], []
    for combo in itertools.product(*per_factor):
        if sum(ev for _, ev in combo) == value:
            hits.append(tuple(k for k, _ in combo))
            evs.append(tuple(ev for _, ev in combo))
    return SpectrumMembership(bool(hits), tuple(hits), tuple(evs))


class WeakRigidity(str, Enum):
    WEAKLY_SOLITONIC_RIGID = "WEAKLY_SOLITONIC_RIGID"
    INCONCLUSIVE_HAS_2MU = "INCONCLUSIVE_HAS_2MU"


@dataclass(frozen=True)
class WeakRigidityResult:
    verdict: WeakRigidity
    membership: SpectrumMembership


def weak_rigidity_check(d: Manifold) -> WeakRigidityResult:
    """Spectral test: if 2 mu is not a Laplace eigenvalue, nearby solitons are Einstein."""
    if d.mu <= 0:
        raise UnsupportedManifoldError("weak rigidity test needs mu > 0")
    hit = spectrum_contains(d, 2 * d.mu)
    verdict = WeakRigidity.INCONCLUSIVE_HAS_2MU if hit else WeakRigidity.WEAKLY_SOLITONIC_RIGID
    return WeakRigidityResult(verdict, hit)


# ---------------------------------------------------------------------------
# Eigenfunctions
# ---------------------------------------------------------------------------


def fubini_study_basis(M: int) -> tuple[list[Poly], list[str]]:
    """Basis of H_{1,1} on C^M from a trace-free Hermitian basis.

    Diagonal part: ``sum_{i<=k} |z_i|^2 - k |z_{k+1}|^2`` for k = 1..M-1.
    Off-diagonal part, for each i < j: ``z_i zbar_j + z_j zbar_i`` and
    ``i (z_i zbar_j - z_j zbar_i)``.
    """
    polys, labels = [], []
    for k in range(1, M):
        lam = [Fraction(1)] * k + [Fraction(-k)] + [Fraction(0)] * (M - k - 1)
        polys.append(hermitian_poly(lam))
        labels.append("diag(" + ",".join(str(v) for v in lam) + ")")
    for i in range(1, M):
        for j in range(i + 1, M + 1):
            polys.append(z(i, M) * zbar(j, M) + z(j, M) * zbar(i, M))
            labels.append(f"re({i},{j})")
            polys.append(I * (z(i, M) * zbar(j, M) - z(j, M) * zbar(i, M)))
            labels.append(f"im({i},{j})")
    return polys, labels


def gell_mann_coordinates(lam: Sequence) -> list[Fraction]:
    """Coordinates of a trace-free diagonal ``lam`` in the diagonal basis above.

    The diagonal vectors are pairwise orthogonal with squared norm k(k+1).
    """
    lam = [Fraction(v) for v in lam]
    if sum(lam) != 0:
        raise ValueError("diagonal entries must sum to zero")
    out = []
    for k in range(1, len(lam)):
        dot = sum(lam[:k]) - k * lam[k]
        out.append(dot / (k * (k + 1)))
    return out


def sphere_basis(N: int) -> tuple[list[Poly], list[str]]:
    """Coordinate functions x_1..x_N restricted to S^{N-1}."""
    return [x(j, N) for j in range(1, N + 1)], [f"x{j}" for j in range(1, N + 1)]


@dataclass(frozen=True, eq=False)
class EigenfunctionBasis:
    manifold: Manifold
    eigenvalue: Fraction
    elements: tuple[Poly, ...]
    labels: tuple[str, ...]
    slots: tuple[int, ...]  # factor index each element is pulled back from
    layout: tuple[Segment, ...] = field(default=())

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def combine(self, coords: Sequence) -> Poly:
        """The eigenfunction with the given basis coordinates."""
        if len(coords) != len(self.elements):
            raise ValueError(f"expected {len(self.elements)} coordinates, got {len(coords)}")
        out = Poly.zero(self.layout)
        for c, e in zip(coords, self.elements):
            if c:
                out = out + Fraction(c) * e
        return out

    def coordinates(self, p: Poly) -> list[Fraction]:
        """Exact coordinates of ``p`` in this basis; ValueError if ``p`` is not in the span."""
        if p.layout != self.layout:
            raise ValueError(f"polynomial on {p.layout}, basis on {self.layout}")
        try:
            return solve_exact([e.terms for e in self.elements], p.terms)
        except ValueError as exc:
            raise ValueError(f"not in E(2mu): {exc}") from exc

    def diagonal_coordinates(self, lam: Sequence) -> list[Fraction]:
        """Coordinates of ``sum lam_i |z_i|^2`` on a single CP^m."""
        if not isinstance(self.manifold, FubiniStudy):
            raise UnsupportedManifoldError("diagonal coordinates only make sense on CP^m")
        diag = gell_mann_coordinates(lam)
        return diag + [Fraction(0)] * (len(self.elements) - len(diag))


@lru_cache(maxsize=64)
def build_E2mu(d: Manifold) -> EigenfunctionBasis:
    """Exact basis of the Laplace eigenspace at 2 mu.

    Every factor eigenfunction appearing is a degree-one harmonic (k = 1):
    linear functions on S^2 factors and H_{1,1} on CP^m factors.  Product
    eigenspaces are unions of factor pullbacks; mixed products of factor
    eigenfunctions are refused.
    """
    target = 2 * d.mu
    hit = spectrum_contains(d, target)
    if not hit:
        raise UnsupportedManifoldError(f"2mu = {target} is not an eigenvalue of {d.spec()}")
    for w in hit.witnesses:
        if sum(1 for k in w if k) > 1:
            raise UnsupportedCrossTermsError(
                f"E(2mu) on {d.spec()} contains products of factor eigenfunctions (levels {w})"
            )
        if max(w) > 1:
            raise UnsupportedManifoldError(f"E(2mu) on {d.spec()} needs level {max(w)} harmonics")
    layout = layout_of(d)
    elements, labels, slots = [], [], []
    multi = len(d.factors) > 1
    for slot in sorted(next(i for i, k in enumerate(w) if k) for w in hit.witnesses):
        f = d.factors[slot]
        if isinstance(f, Sphere):
            polys, names = sphere_basis(f.n + 1)
        else:
            polys, names = fubini_study_basis(f.m + 1)
        for p, nm in zip(polys, names):
            elements.append(p.pullback(layout, slot) if multi else p)
            labels.append(f"pr{slot + 1}*{nm}" if multi else nm)
            slots.append(slot)
    return EigenfunctionBasis(d, target, tuple(elements), tuple(labels), tuple(slots), layout)


def expected_dimension(d: Manifold) -> int:
    """Closed-form dim E(2 mu): (m+1)^2 - 1 per CP^m factor, 3 per S^2 factor."""
    total = 0
    for f in d.factors:
        if f.eigenvalue(1) != 2 * d.mu:
            continue
        total += (f.m + 1) ** 2 - 1 if isinstance(f, FubiniStudy) else f.n + 1
    return total


def conformal_map_injective(d: Manifold) -> bool:
    """Whether v -> mu v g + Hess v is injective on E(2 mu).

    Tracing ``mu v g + Hess v = 0`` gives ``(n - 2) mu v = 0`` with n the real
    dimension, so the map is injective exactly when n != 2.  On S^2 (and
    CP^1 = S^2(1/2)) every first eigenfunction satisfies Hess v = -mu v g.
    """
    return d.real_dim != 2


# ---------------------------------------------------------------------------
# Hermitian forms
# ---------------------------------------------------------------------------

DIAG_TOL = 1e-12


@dataclass(frozen=True)
class HermitianForm:
    """Trace-free Hermitian matrix A inducing ``sum A_ij z_i zbar_j`` in H_{1,1}."""

    matrix: tuple[tuple, ...]

    def __post_init__(self):
        A = tuple(tuple(c if isinstance(c, Gaussian) else Fraction(c) for c in row) for row in self.matrix)
        object.__setattr__(self, "matrix", A)
        n = len(A)
        if any(len(row) != n for row in A):
            raise ValueError("matrix must be square")
        for i in range(n):
            for j in range(n):
                if A[i][j] != conj(A[j][i]):
                    raise ValueError("matrix is not Hermitian")
        if sum(A[i][i] for i in range(n)) != 0:
            raise ValueError("matrix is not trace-free")

    @property
    def size(self) -> int:
        return len(self.matrix)

    @classmethod
    def from_poly(cls, p: Poly) -> "HermitianForm":
        (seg,) = p.layout
        M = seg.n
        if p.bidegree() != (1, 1):
            raise ValueError("need a bidegree (1,1) polynomial")
        A = [[Fraction(0)] * M for _ in range(M)]
        for e, c in p.terms.items():
            i, j = e.index(1), e[M:].index(1)
            A[i][j] = c
        return cls(tuple(tuple(r) for r in A))

    def to_poly(self) -> Poly:
        M = self.size
        out = Poly.zero((Segment("complex", M),))
        for i in range(M):
            for j in range(M):
                if self.matrix[i][j] != 0:
                    out = out + self.matrix[i][j] * z(i + 1, M) * zbar(j + 1, M)
        return out

    def is_diagonal(self) -> bool:
        return all(self.matrix[i][j] == 0 for i in range(self.size) for j in range(self.size) if i != j)

    def is_flat_harmonic(self) -> bool:
        return not flat_laplacian(self.to_poly())


@dataclass(frozen=True)
class Diagonalization:
    eigenvalues: tuple
    exact: bool
    tolerance: float = 0.0


def diagonalize(A: HermitianForm) -> Diagonalization:
    """Eigenvalues of a trace-free Hermitian form.

    Diagonal input is returned exactly in coordinate order.  Anything else
    goes through ``numpy.linalg.eigvalsh`` (sorted descending) and is
    flagged approximate with tolerance ``DIAG_TOL``.
    """
    if A.is_diagonal():
        return Diagonalization(tuple(A.matrix[i][i] for i in range(A.size)), True)
    arr = np.array([[complex(c) for c in row] for row in A.matrix])
    vals = np.linalg.eigvalsh(arr)[::-1]
    vals = np.where(np.abs(vals) < DIAG_TOL, 0.0, vals)
    return Diagonalization(tuple(float(v) for v in vals), False, DIAG_TOL)
