"""Independent checks: Monte-Carlo quadrature and exact identity suites.

The Monte-Carlo oracle shares nothing with the exact path except the
polynomial representation: points are drawn uniformly on each sphere by
normalizing standard-normal vectors and the integrand is evaluated in
floating point.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .manifolds import (
    EigenfunctionBasis,
    FubiniStudy,
    Manifold,
    Sphere,
    build_E2mu,
    layout_of,
)
from .moments import integrate
from .poly import (
    LayoutMismatchError,
    Poly,
    ambient_grad_sq,
    complex_layout,
    flat_laplacian,
    hermitian_poly,
    r2,
    serialize,
)

CHUNK = 100_000


class IdentityFailure(AssertionError):
    """An exact identity failed; the message carries the offending polynomial."""


class NotInEigenspaceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Monte-Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class McConfig:
    samples: int = 1_000_000
    seed: int = 0
    sigmas: float = 4.0

    def __post_init__(self):
        if self.samples < 10_000:
            raise ValueError("Monte-Carlo needs at least 10^4 samples")


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    samples: int

    def agrees(self, exact, sigmas: float = 4.0) -> bool:
        err = abs(self.estimate - float(exact))
        if self.stderr == 0:
            return err <= 1e-12
        return err <= sigmas * self.stderr


def _draw(rng: np.random.Generator, layout, n: int) -> list[np.ndarray]:
    out = []
    for s in layout:
        g = rng.standard_normal((n, s.width))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        out.append(g[:, : s.n] + 1j * g[:, s.n:] if s.kind == "complex" else g)
    return out


def evaluate_samples(p: Poly, points: Sequence[np.ndarray]) -> np.ndarray:
    """Vectorized floating-point evaluation; ``points[k]`` holds the samples of segment k."""
    cols = []
    for s, arr in zip(p.layout, points):
        if s.kind == "complex":
            cols += [arr[:, j] for j in range(s.n)]
            cols += [np.conj(arr[:, j]) for j in range(s.n)]
        else:
            cols += [arr[:, j] for j in range(s.n)]
    n = len(points[0])
    powers: dict = {}
    total = np.zeros(n, dtype=complex)
    for e, c in p.sorted_terms():
        term = np.full(n, complex(c))
        for i, k in enumerate(e):
            if k:
                if (i, k) not in powers:
                    powers[i, k] = cols[i] ** k
                term = term * powers[i, k]
        total += term
    return total.real


def mc_integrate_many(polys: Sequence[Poly], cfg: McConfig = McConfig()) -> list[McEstimate]:
    """Estimate several integrals from one shared, seeded stream of samples.

    Chunks are combined in a fixed order with the pairwise mean/variance
    update, so the result is reproducible bit for bit.
    """
    if not polys:
        return []
    layout = polys[0].layout
    if any(p.layout != layout for p in polys):
        raise LayoutMismatchError("all integrands must share a layout")
    rng = np.random.default_rng(cfg.seed)
    stats = [(0, 0.0, 0.0)] * len(polys)
    done = 0
    while done < cfg.samples:
        n = min(CHUNK, cfg.samples - done)
        pts = _draw(rng, layout, n)
        for k, p in enumerate(polys):
            vals = evaluate_samples(p, pts)
            nb, mb = n, float(vals.mean())
            m2b = float(((vals - mb) ** 2).sum())
            na, ma, m2a = stats[k]
            tot = na + nb
            delta = mb - ma
            stats[k] = (tot, ma + delta * nb / tot, m2a + m2b + delta * delta * na * nb / tot)
        done += n
    out = []
    for n, mean, m2 in stats:
        var = m2 / (n - 1) if n > 1 else 0.0
        out.append(McEstimate(mean, math.sqrt(var / n), n))
    return out


def mc_integrate(p: Poly, d: Manifold | None = None, cfg: McConfig = McConfig()) -> McEstimate:
    """Monte-Carlo mean of ``p`` over the spheres of its layout (normalized measure)."""
    if d is not None and layout_of(d) != p.layout:
        raise LayoutMismatchError(f"{d.spec()} has layout {layout_of(d)}, integrand {p.layout}")
    return mc_integrate_many([p], cfg)[0]


@dataclass(frozen=True)
class McComparison:
    label: str
    exact: Fraction
    estimate: McEstimate
    within: bool


def mc_gram_agreement(basis: EigenfunctionBasis, cfg: McConfig = McConfig(), max_entries: int = 10) -> list[McComparison]:
    """Compare a fixed selection of Gram entries against Monte-Carlo.

    Entries T[a][b][c] with a <= b <= c < 3 are taken first, then the
    squared norms of the first basis elements, up to ``max_entries``.
    """
    picks = []
    k = min(3, len(basis))
    for a in range(k):
        for b in range(a, k):
            for c in range(b, k):
                picks.append((f"T[{a}][{b}][{c}]", basis[a] * basis[b] * basis[c]))
    for a in range(k):
        picks.append((f"|e{a}|^2", basis[a] * basis[a]))
    picks = picks[:max_entries]
    ests = mc_integrate_many([p for _, p in picks], cfg)
    out = []
    for (label, p), est in zip(picks, ests):
        exact = integrate(p)
        out.append(McComparison(label, exact, est, est.agrees(exact, cfg.sigmas)))
    return out


# ---------------------------------------------------------------------------
# Gradient identity
# ---------------------------------------------------------------------------


def tangential_grad_sq(v: Poly, d: Manifold) -> Poly:
    """|grad v|^2 on the manifold, as a polynomial valid on the unit spheres.

    Per factor: ambient |grad v|^2 minus the squared radial derivative, divided
    by the factor's metric scale.  For S^1-invariant v the gradient on
    S^{2m+1} is horizontal and has the same length on CP^m.
    """
    out = Poly.zero(v.layout)
    for slot, f in enumerate(d.factors):
        radial = v.euler(slot)
        out = out + (ambient_grad_sq(v, slot) - radial * radial) / f.scale
    return out


@dataclass(frozen=True)
class GradientIdentity:
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def gradient_identity_check(v: Poly, w: Poly, d: Manifold) -> GradientIdentity:
    """Both sides of ``int |grad v|^2 w = mu int v^2 w`` for v, w in E(2 mu).

    Follows from integrating ``Delta(v^2) = 2 v Delta v - 2 |grad v|^2``
    against w and moving the Laplacian onto w.
    """
    basis = build_E2mu(d)
    members = set(basis.elements)
    for name, f in (("v", v), ("w", w)):
        if f in members:
            continue
        try:
            basis.coordinates(f)
        except ValueError as exc:
            raise NotInEigenspaceError(f"{name} = {serialize(f)} is not in E(2mu) of {d.spec()}") from exc
    lhs = integrate(tangential_grad_sq(v, d) * w)
    rhs = d.mu * integrate(v * v * w)
    return GradientIdentity(lhs, rhs)


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------


@dataclass
class SuiteItem:
    name: str
    status: str  # "pass" or "skip"
    detail: str


@dataclass
class SuiteReport:
    manifold: str
    items: list = field(default_factory=list)
    mc: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.status in ("pass", "skip") for i in self.items) and all(c.within for c in self.mc)

    def lines(self) -> list[tuple[str, str]]:
        out = [("manifold", self.manifold)]
        for it in self.items:
            out.append((f"identity.{it.name}", f"{it.status} ({it.detail})"))
        for c in self.mc:
            out.append((
                f"mc.{c.label}",
                f"{'pass' if c.within else 'FAIL'} exact={c.exact} estimate={c.estimate.estimate:.6f} "
                f"stderr={c.estimate.stderr:.2e}",
            ))
        out.append(("result", "pass" if self.passed else "FAIL"))
        return out


def _fail(what: str, p: Poly):
    raise IdentityFailure(f"{what}: {serialize(p)}")


def random_trace_free(M: int, rng: random.Random) -> list[Fraction]:
    """Random rational vector of length M with zero sum and not all zero."""
    while True:
        lam = [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(M - 1)]
        lam.append(-sum(lam))
        if any(lam):
            return lam


def laplacian_of_square_identity(lam: Sequence) -> tuple[Poly, Poly]:
    """``(flat_laplacian(f^2), -8 sum lam_i^2 |z_i|^2)`` for ``f = sum lam_i |z_i|^2``."""
    f = hermitian_poly(lam)
    return flat_laplacian(f * f), -8 * hermitian_poly([Fraction(v) ** 2 for v in lam])


def laplacian_of_r4_identity(M: int) -> tuple[Poly, Poly]:
    """``(flat_laplacian(r^4), -8 (M+1) r^2)`` on C^M."""
    rr = r2(complex_layout(M))
    return flat_laplacian(rr * rr), -8 * (M + 1) * rr


def _segment_degrees(p: Poly, slot: int) -> set:
    s = p.layout[slot]
    out = set()
    for e in p.terms:
        ex = list(p.segment_exponents(e))[slot][1]
        out.add((sum(ex[: s.n]), sum(ex[s.n:])) if s.kind == "complex" else sum(ex))
    return out


def identity_suite(d: Manifold, seed: int = 0, n_random: int = 20) -> SuiteReport:
    """Run every exact identity behind the obstruction argument on ``d``.

    Items: (a) flat-harmonicity and degree of each E(2 mu) basis element,
    (b) the Laplacian of a squared diagonal form, (c) the Laplacian of r^4,
    (d) zero means, (e) antipodal oddness on sphere factors, (f) the gradient
    identity on every ordered pair of basis elements.
    Raises :class:`IdentityFailure` on the first failure.
    """
    basis = build_E2mu(d)
    rep = SuiteReport(d.spec())
    items = rep.items

    for e, slot in zip(basis, basis.slots):
        if flat_laplacian(e):
            _fail("basis element is not flat-harmonic", e)
        want = (1, 1) if isinstance(d.factors[slot], FubiniStudy) else 1
        if _segment_degrees(e, slot) != {want}:
            _fail(f"basis element has wrong degree (want {want})", e)
    items.append(SuiteItem("a_harmonic_degree", "pass", f"{len(basis)} basis elements"))

    fs = [f for f in d.factors if isinstance(f, FubiniStudy)]
    if fs:
        rng = random.Random(seed)
        count = 0
        for f in fs:
            for _ in range(n_random):
                got, want = laplacian_of_square_identity(random_trace_free(f.m + 1, rng))
                if got != want:
                    _fail("Laplacian of f^2 mismatch", got - want)
                count += 1
        items.append(SuiteItem("b_laplacian_f_squared", "pass", f"{count} random trace-free lambda"))
        for f in fs:
            got, want = laplacian_of_r4_identity(f.m + 1)
            if got != want:
                _fail("Laplacian of r^4 mismatch", got - want)
        items.append(SuiteItem("c_laplacian_r4", "pass", "-8(M+1) r^2 on C^M"))
    else:
        items.append(SuiteItem("b_laplacian_f_squared", "skip", "no complex factor"))
        items.append(SuiteItem("c_laplacian_r4", "skip", "no complex factor"))

    for e in basis:
        if integrate(e) != 0:
            _fail("basis element has nonzero mean", e)
    items.append(SuiteItem("d_zero_mean", "pass", f"{len(basis)} basis elements"))

    sphere_slots = [k for k, f in enumerate(d.factors) if isinstance(f, Sphere)]
    if sphere_slots:
        odd = [(e, s) for e, s in zip(basis, basis.slots) if s in sphere_slots]
        for e, s in odd:
            if e.substitute_sign(s) != -e:
                _fail("sphere eigenfunction is not antipodally odd", e)
        triples = 0
        for i in range(len(odd)):
            for j in range(i, len(odd)):
                for k in range(j, len(odd)):
                    p = odd[i][0] * odd[j][0] * odd[k][0]
                    if integrate(p) != 0:
                        _fail("odd cubic integral does not vanish", p)
                    triples += 1
        items.append(SuiteItem("e_antipodal", "pass", f"{len(odd)} odd elements, {triples} cubic integrals"))
    else:
        items.append(SuiteItem("e_antipodal", "skip", "no sphere factor"))

    grads = [tangential_grad_sq(v, d) for v in basis]
    for a, v in enumerate(basis):
        for b, w in enumerate(basis):
            lhs = integrate(grads[a] * w)
            rhs = d.mu * integrate(v * v * w)
            if lhs != rhs:
                _fail(f"gradient identity fails ({lhs} != {rhs}) for v = {basis.labels[a]}, w", w)
    items.append(SuiteItem("f_gradient_identity", "pass", f"{len(basis) ** 2} pairs"))
    return rep


__all__ = [
    "McConfig",
    "McEstimate",
    "mc_integrate",
    "mc_integrate_many",
    "mc_gram_agreement",
    "gradient_identity_check",
    "tangential_grad_sq",
    "identity_suite",
    "IdentityFailure",
    "NotInEigenspaceError",
]
