"""Second-order obstruction to integrating conformal solitonic deformations.

For an Einstein metric with constant mu and v in E(2 mu), the deformation
``mu v g + Hess v`` fails to integrate to second order as soon as some
w in E(2 mu) has ``int v^2 w dV != 0``.  Everything here is the cubic form
``T(u, v, w) = int u v w dV`` on E(2 mu), evaluated exactly.

The global verdict on CP^m does not rely on sampling.  The cubic form is
invariant under the unitary group, so every v is equivalent to a diagonal
form ``sum lam_i |z_i|^2`` with ``sum lam_i = 0``; such a v is unobstructed
exactly when all ``lam_i^2`` agree, which needs an even number of entries.

On a product the form splits: for v = sum_j v_j (v_j pulled back from
factor j) and w pulled back from factor j,
``T(v, v, w) = T_j(v_j, v_j, w)`` because every cross term carries a
factor integral of a mean-zero eigenfunction.  The kernel of a product is
therefore the direct sum of the factor kernels.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Sequence

from .manifolds import (
    EigenfunctionBasis,
    FubiniStudy,
    Manifold,
    Sphere,
    UnsupportedManifoldError,
    WeakRigidity,
    build_E2mu,
    conformal_map_injective,
    ied_dimension,
    weak_rigidity_check,
)
from .moments import integrate
from .poly import format_coefficient, hermitian_poly

SCHEMA = "rigidity-report/1"


class ObstructionStatus(str, Enum):
    OBSTRUCTED = "OBSTRUCTED"
    UNOBSTRUCTED_AT_ORDER_2 = "UNOBSTRUCTED_AT_ORDER_2"


class GlobalVerdict(str, Enum):
    ALL_OBSTRUCTED = "ALL_OBSTRUCTED"
    KERNEL_FAMILY_EXISTS = "KERNEL_FAMILY_EXISTS"
    ALL_UNOBSTRUCTED_AT_ORDER_2 = "ALL_UNOBSTRUCTED_AT_ORDER_2"
    NO_CONFORMAL_DEFORMATIONS = "NO_CONFORMAL_DEFORMATIONS"


class KernelKind(str, Enum):
    EMPTY = "EMPTY"
    FAMILY = "FAMILY"
    FULL = "FULL"


# ---------------------------------------------------------------------------
# Gram tensor
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CubicGramTensor:
    """Symmetric ``T[a][b][c] = int e_a e_b e_c dV``, stored for a <= b <= c."""

    basis: EigenfunctionBasis
    entries: dict

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __getitem__(self, idx) -> Fraction:
        return self.entries[tuple(sorted(idx))]

    def contract(self, u: Sequence, v: Sequence, c: int) -> Fraction:
        """``T(u, v, e_c)`` for coordinate vectors u, v."""
        total = Fraction(0)
        for a, ua in enumerate(u):
            if not ua:
                continue
            for b, vb in enumerate(v):
                if vb:
                    total += ua * vb * self[a, b, c]
        return total

    def nonzero(self) -> dict:
        return {k: v for k, v in self.entries.items() if v != 0}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "b", "c", "label_a", "label_b", "label_c", "value"])
        labels = self.basis.labels
        for (a, b, c), val in sorted(self.entries.items()):
            w.writerow([a, b, c, labels[a], labels[b], labels[c], format_coefficient(val)])
        return buf.getvalue()


def gram_tensor(basis: EigenfunctionBasis) -> CubicGramTensor:
    """All d(d+1)(d+2)/6 independent entries, computed exactly and in a fixed order."""
    d = len(basis)
    entries = {}
    for a in range(d):
        for b in range(a, d):
            ab = basis[a] * basis[b]
            for c in range(b, d):
                entries[a, b, c] = integrate(ab * basis[c])
    return CubicGramTensor(basis, entries)


# ---------------------------------------------------------------------------
# Per-deformation verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionVerdict:
    status: ObstructionStatus
    coordinates: tuple | None = None
    lam: tuple | None = None
    witness: int | None = None
    witness_label: str | None = None
    witness_coordinates: tuple | None = None
    witness_lam: tuple | None = None
    value: Fraction | None = None
    pairings: tuple | None = None

    @property
    def obstructed(self) -> bool:
        return self.status is ObstructionStatus.OBSTRUCTED

    def items(self) -> list[tuple[str, str]]:
        out = [("status", self.status.value)]
        if self.lam is not None:
            out.append(("lambda", _vec(self.lam)))
        if self.coordinates is not None:
            out.append(("coordinates", _vec(self.coordinates)))
        if self.obstructed:
            if self.witness_label is not None:
                out.append(("witness", self.witness_label))
            if self.witness_lam is not None:
                out.append(("witness_lambda", _vec(self.witness_lam)))
            if self.witness_coordinates is not None:
                out.append(("witness_coordinates", _vec(self.witness_coordinates)))
            out.append(("value", format_coefficient(self.value)))
        elif self.pairings is not None:
            out.append(("witnesses_checked", str(len(self.pairings))))
        return out


def _as_coords(v: Sequence) -> tuple:
    coords = tuple(Fraction(c) for c in v)
    if not any(coords):
        raise ValueError("the zero vector is not a deformation")
    return coords


def _verdict(coords, pairings, basis, lam=None) -> ObstructionVerdict:
    for k, val in enumerate(pairings):
        if val != 0:
            e = tuple(Fraction(int(i == k)) for i in range(len(pairings)))
            return ObstructionVerdict(
                ObstructionStatus.OBSTRUCTED, coords, lam, k, basis.labels[k], e, None, val, tuple(pairings)
            )
    return ObstructionVerdict(ObstructionStatus.UNOBSTRUCTED_AT_ORDER_2, coords, lam, pairings=tuple(pairings))


def obstruction_check(v: Sequence, T: CubicGramTensor) -> ObstructionVerdict:
    """Evaluate ``T(v, v, e_w)`` for every basis element; the first nonzero one is the witness."""
    coords = _as_coords(v)
    if len(coords) != T.dim:
        raise ValueError(f"expected {T.dim} coordinates, got {len(coords)}")
    pairings = [T.contract(coords, coords, c) for c in range(T.dim)]
    return _verdict(coords, pairings, T.basis)


def obstruction_check_direct(v: Sequence, basis: EigenfunctionBasis, lam=None) -> ObstructionVerdict:
    """Same decision as :func:`obstruction_check`, integrating ``v^2 e_w`` without the full tensor."""
    coords = _as_coords(v)
    vp = basis.combine(coords)
    sq = vp * vp
    pairings = [integrate(sq * e) for e in basis]
    return _verdict(coords, pairings, basis, lam)


def diagonal_moment_constant(M: int) -> Fraction:
    """``int |z_1|^2 |z_2|^2 |z_3|^2`` on S^{2M-1} when M >= 3, i.e. (M-1)!/(M+2)!."""
    return Fraction(factorial(M - 1), factorial(M + 2))


def diagonal_criterion(lam: Sequence, m: int) -> ObstructionVerdict:
    """Decide the diagonal deformation ``v = sum lam_i |z_i|^2`` on CP^m.

    Obstructed iff the squares ``lam_i^2`` are not all equal.  The witness is
    the trace-free part of ``diag(lam_i^2)``; for diagonal u, w with zero
    trace, ``int u^2 w = 2 c sum u_i^2 w_i`` with c from
    :func:`diagonal_moment_constant`, so the witness value is
    ``2c (sum lam^4 - (sum lam^2)^2 / M)``, positive by Cauchy-Schwarz.
    In the unobstructed case every basis pairing is integrated and checked.
    """
    lam = tuple(Fraction(v) for v in lam)
    M = m + 1
    if len(lam) != M:
        raise ValueError(f"CP^{m} needs {M} diagonal entries, got {len(lam)}")
    if sum(lam) != 0:
        raise ValueError(f"diagonal entries must sum to zero (sum = {sum(lam)})")
    if not any(lam):
        raise ValueError("the zero vector is not a deformation")
    basis = build_E2mu(FubiniStudy(m))
    squares = [v * v for v in lam]
    if len(set(squares)) > 1:
        mean = sum(squares) / M
        w = tuple(s - mean for s in squares)
        value = 2 * diagonal_moment_constant(M) * (sum(s * s for s in squares) - sum(squares) ** 2 / M)
        return ObstructionVerdict(
            ObstructionStatus.OBSTRUCTED,
            coordinates=tuple(basis.diagonal_coordinates(lam)),
            lam=lam,
            witness_label="diag(" + ",".join(str(c) for c in w) + ")",
            witness_coordinates=tuple(basis.diagonal_coordinates(w)),
            witness_lam=w,
            value=value,
        )
    f = hermitian_poly(lam)
    sq = f * f
    pairings = tuple(integrate(sq * e) for e in basis)
    if any(pairings):
        raise AssertionError(f"balanced diagonal form {lam} pairs nontrivially: {pairings}")
    return ObstructionVerdict(
        ObstructionStatus.UNOBSTRUCTED_AT_ORDER_2,
        coordinates=tuple(basis.diagonal_coordinates(lam)),
        lam=lam,
        pairings=pairings,
    )


# ---------------------------------------------------------------------------
# Kernel families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelComponent:
    slot: int
    factor: str
    kind: KernelKind
    representative_lam: tuple | None = None
    description: str = ""


@dataclass(frozen=True)
class KernelFamily:
    kind: KernelKind
    components: tuple[KernelComponent, ...]
    representative: tuple | None = None  # basis coordinates
    representative_lam: tuple | None = None
    description: str = ""


def _factor_kernel(slot: int, f) -> KernelComponent:
    if isinstance(f, Sphere):
        return KernelComponent(
            slot, f.spec(), KernelKind.FULL,
            description="linear functions are odd under the antipodal map, so every cubic pairing vanishes",
        )
    M = f.m + 1
    if M % 2:
        return KernelComponent(
            slot, f.spec(), KernelKind.EMPTY,
            description=f"{M} diagonal entries cannot share one |lambda| and sum to zero",
        )
    rep = tuple([Fraction(1)] * (M // 2) + [Fraction(-1)] * (M // 2))
    if M == 2:
        return KernelComponent(
            slot, f.spec(), KernelKind.FULL, rep,
            description="every trace-free 2x2 Hermitian form has eigenvalues +-a",
        )
    return KernelComponent(
        slot, f.spec(), KernelKind.FAMILY, rep,
        description="unitary orbit of diagonal forms with all |lambda_i| equal and sum zero",
    )


def kernel_family(d: Manifold) -> KernelFamily:
    """Cone of v in E(2 mu) with ``T(v, v, w) = 0`` for all w."""
    basis = build_E2mu(d)
    comps = []
    for slot, f in enumerate(d.factors):
        if slot in basis.slots:
            comps.append(_factor_kernel(slot, f))
    kinds = {c.kind for c in comps}
    if kinds == {KernelKind.EMPTY}:
        return KernelFamily(KernelKind.EMPTY, tuple(comps), description="only v = 0")
    if kinds == {KernelKind.FULL}:
        kind = KernelKind.FULL
    else:
        kind = KernelKind.FAMILY
    rep_comp = next(c for c in comps if c.kind is not KernelKind.EMPTY)
    idx = [i for i, s in enumerate(basis.slots) if s == rep_comp.slot]
    coords = [Fraction(0)] * len(basis)
    rep_lam = None
    if rep_comp.representative_lam is None:
        coords[idx[0]] = Fraction(1)
    else:
        rep_lam = rep_comp.representative_lam
        local = build_E2mu(d.factors[rep_comp.slot]).diagonal_coordinates(rep_lam)
        for i, c in zip(idx, local):
            coords[i] = c
    if len(comps) == 1:
        desc = comps[0].description
    else:
        desc = "direct sum of factor kernels: " + "; ".join(f"{c.factor}: {c.kind.value}" for c in comps)
    return KernelFamily(kind, tuple(comps), tuple(coords), rep_lam, desc)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

FINITE_ORDER_CLAIM = (
    "rigidity follows from the lemma that a shrinking soliton all of whose infinitesimal "
    "solitonic deformations integrate only to finite order is isolated in the moduli space; "
    "this is a theorem quoted here, not re-proved by the computation"
)


@dataclass
class RigidityReport:
    manifold: str
    real_dim: int
    mu: Fraction
    tau: Fraction
    weak_rigidity: WeakRigidity
    weak_witnesses: tuple
    dim_E2mu: int
    dim_IED: int | None
    dim_conformal: int
    verdict: GlobalVerdict
    rigid: bool
    kernel: KernelFamily | None = None
    certificate: str = ""
    evidence: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    interpretation: str = ""

    @property
    def dim_ISD(self) -> int:
        return (self.dim_IED or 0) + self.dim_conformal

    @property
    def dim_ISD_lower_bound(self) -> bool:
        return self.dim_IED is None

    def items(self) -> list[tuple[str, str]]:
        out = [
            ("schema", SCHEMA),
            ("manifold", self.manifold),
            ("real_dimension", str(self.real_dim)),
            ("einstein_constant", str(self.mu)),
            ("tau", str(self.tau)),
            ("two_mu", str(2 * self.mu)),
            ("weak_rigidity", self.weak_rigidity.value),
            ("weak_rigidity_witnesses", " ".join("(" + ",".join(map(str, w)) + ")" for w in self.weak_witnesses) or "none"),
            ("dim_E2mu", str(self.dim_E2mu)),
            ("dim_IED", "unknown" if self.dim_IED is None else str(self.dim_IED)),
            ("dim_conformal_ISD", str(self.dim_conformal)),
            ("dim_ISD", str(self.dim_ISD)),
            ("dim_ISD_is_lower_bound", str(self.dim_ISD_lower_bound).lower()),
            ("obstruction_verdict", self.verdict.value),
            ("rigid", str(self.rigid).lower()),
        ]
        if self.kernel is not None:
            out.append(("kernel_family", self.kernel.kind.value))
            out.append(("kernel_description", self.kernel.description))
            if self.kernel.representative_lam is not None:
                out.append(("kernel_representative_lambda", _vec(self.kernel.representative_lam)))
            if self.kernel.representative is not None:
                out.append(("kernel_representative_coordinates", _vec(self.kernel.representative)))
        if self.certificate:
            out.append(("certificate", self.certificate))
        for k, v in self.evidence.items():
            out.append((f"evidence.{k}", str(v)))
        if self.interpretation:
            out.append(("interpretation", self.interpretation))
        for i, n in enumerate(self.notes, start=1):
            out.append((f"note.{i}", n))
        return out

    def to_structured_text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.items())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(self.items())
        return buf.getvalue()


def _vec(v) -> str:
    return ",".join(str(Fraction(c)) for c in v)


def analyze(d: Manifold, evidence_limit: int = 40) -> RigidityReport:
    """Assemble the spectral test, dimension count and obstruction verdict for ``d``.

    ``evidence_limit`` caps dim E(2 mu) for which the full Gram tensor is
    computed as supporting evidence; the verdict itself never depends on it.
    """
    weak = weak_rigidity_check(d)
    ied = ied_dimension(d)
    common = dict(
        manifold=d.spec(), real_dim=d.real_dim, mu=d.mu, tau=d.tau,
        weak_rigidity=weak.verdict, weak_witnesses=weak.membership.witnesses, dim_IED=ied,
    )
    if weak.verdict is WeakRigidity.WEAKLY_SOLITONIC_RIGID:
        return RigidityReport(
            **common, dim_E2mu=0, dim_conformal=0,
            verdict=GlobalVerdict.NO_CONFORMAL_DEFORMATIONS, rigid=False,
            certificate="2mu is not a Laplace eigenvalue, so every nearby soliton is Einstein",
            notes=["weak solitonic rigidity only; Einstein rigidity is a separate question"],
        )
    basis = build_E2mu(d)
    kf = kernel_family(d)
    dim_e = len(basis)
    dim_conf = dim_e if conformal_map_injective(d) else 0
    notes = []
    if not conformal_map_injective(d):
        notes.append(
            "real dimension 2: mu v g + Hess v vanishes for every v in E(2mu), "
            "so the conformal deformations are trivial and the cubic criterion is vacuous"
        )
    verdict = {
        KernelKind.EMPTY: GlobalVerdict.ALL_OBSTRUCTED,
        KernelKind.FAMILY: GlobalVerdict.KERNEL_FAMILY_EXISTS,
        KernelKind.FULL: GlobalVerdict.ALL_UNOBSTRUCTED_AT_ORDER_2,
    }[kf.kind]

    fs = [c for c in kf.components if c.kind is not KernelKind.FULL]
    if verdict is GlobalVerdict.ALL_OBSTRUCTED:
        certificate = (
            "diagonal reduction: every v is unitarily equivalent to sum lam_i |z_i|^2 with sum lam_i = 0; "
            "it is unobstructed only if all lam_i^2 agree, impossible with an odd number of entries"
        )
    elif verdict is GlobalVerdict.ALL_UNOBSTRUCTED_AT_ORDER_2:
        certificate = "antipodal symmetry: (sigma x ... x sigma)^* v = -v for all v in E(2mu), so T vanishes identically"
    else:
        certificate = "kernel " + kf.description
        if fs:
            notes.append("higher-order integrability of the kernel deformations is not decided here")

    evidence: dict = {}
    if dim_e <= evidence_limit:
        T = gram_tensor(basis)
        nz = T.nonzero()
        evidence["gram_entries"] = len(T.entries)
        evidence["gram_nonzero_entries"] = len(nz)
        obstructed = sum(
            obstruction_check([int(i == a) for i in range(dim_e)], T).obstructed for a in range(dim_e)
        )
        evidence["basis_elements_obstructed"] = f"{obstructed}/{dim_e}"
        if verdict is GlobalVerdict.ALL_UNOBSTRUCTED_AT_ORDER_2 and nz:
            raise AssertionError("antipodal certificate contradicted by a nonzero Gram entry")
        if kf.representative is not None:
            rep = obstruction_check(kf.representative, T)
            evidence["representative_status"] = rep.status.value
            if rep.obstructed:
                raise AssertionError("kernel representative is obstructed")
    else:
        evidence["gram_tensor"] = f"skipped (dim E(2mu) = {dim_e} > {evidence_limit})"
    if isinstance(d, FubiniStudy) and kf.representative_lam is not None:
        evidence["diagonal_criterion_on_representative"] = diagonal_criterion(kf.representative_lam, d.m).status.value

    rigid = verdict is GlobalVerdict.ALL_OBSTRUCTED and ied == 0
    if verdict is GlobalVerdict.ALL_OBSTRUCTED and ied != 0:
        notes.append("infinitesimal Einstein deformations not known to vanish; rigidity not claimed")
    if verdict is not GlobalVerdict.ALL_OBSTRUCTED:
        notes.append("rigidity is undecided beyond order 2")
    if isinstance(d, FubiniStudy) and (d.m + 1) % 2 == 0:
        notes.append("these spaces are expected to be rigid as well, but this is not established")
    if len(d.factors) > 1 and any(isinstance(f, FubiniStudy) for f in d.factors) and ied is None:
        notes.append("S^2 x CP^{2n} is rigid as an Einstein metric although it has infinitesimal Einstein deformations")
    return RigidityReport(
        **common, dim_E2mu=dim_e, dim_conformal=dim_conf, verdict=verdict, rigid=rigid, kernel=kf,
        certificate=certificate, evidence=evidence, notes=notes,
        interpretation=FINITE_ORDER_CLAIM if rigid else "",
    )


def require_supported(d: Manifold) -> None:
    """Raise :class:`UnsupportedManifoldError` if ``analyze`` cannot handle ``d``."""
    if weak_rigidity_check(d).verdict is WeakRigidity.INCONCLUSIVE_HAS_2MU:
        build_E2mu(d)
