"""Exact multivariate polynomials in complex (z, zbar) or real coordinates.

A polynomial lives on a *layout*: a tuple of :class:`Segment` blocks, each
either ``complex`` (coordinates z_1..z_M together with their conjugates) or
``real`` (coordinates x_1..x_N).  Single-segment layouts are the usual case;
multi-segment layouts carry functions on products of spheres, where every
monomial is automatically a separable product of per-segment monomials.

A monomial is stored as one flat exponent tuple.  A complex segment of size
M contributes 2M entries (holomorphic exponents first, then antiholomorphic),
a real segment of size N contributes N entries.

Coefficients are :class:`fractions.Fraction` or :class:`Gaussian` (exact
rationals adjoined with i).  Nothing in this module rounds.

The Laplacian follows the geometer's sign convention: on flat space it is
minus the sum of second derivatives, so ``-4 sum d/dz_j d/dzbar_j`` on C^M.
"""
from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence


class DegreeMismatchError(ValueError):
    """Input polynomial is not (bi)homogeneous as required."""


class LayoutMismatchError(ValueError):
    """Operands live on different coordinate layouts."""


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


class Gaussian:
    """Exact complex rational ``real + imag*i`` with a nonzero imaginary part.

    Arithmetic collapses back to :class:`Fraction` whenever the imaginary
    part cancels, so real-valued computations stay in plain rationals.
    """

    __slots__ = ("real", "imag")

    def __init__(self, real, imag):
        self.real = Fraction(real)
        self.imag = Fraction(imag)

    def conjugate(self):
        return Gaussian(self.real, -self.imag)

    def __add__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        re_, im = _parts(other)
        return gaussian(self.real + re_, self.imag + im)

    __radd__ = __add__

    def __sub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        re_, im = _parts(other)
        return gaussian(self.real - re_, self.imag - im)

    def __rsub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        re_, im = _parts(other)
        return gaussian(re_ - self.real, im - self.imag)

    def __mul__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        re_, im = _parts(other)
        return gaussian(self.real * re_ - self.imag * im, self.real * im + self.imag * re_)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        re_, im = _parts(other)
        den = re_ * re_ + im * im
        return gaussian((self.real * re_ + self.imag * im) / den, (self.imag * re_ - self.real * im) / den)

    def __rtruediv__(self, other):
        return Gaussian(*_parts(other)) / self

    def __neg__(self):
        return Gaussian(-self.real, -self.imag)

    def __pow__(self, n: int):
        out = Fraction(1)
        for _ in range(n):
            out = self * out
        return out

    def __eq__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        re_, im = _parts(other)
        return self.real == re_ and self.imag == im

    def __hash__(self):
        return hash((self.real, self.imag))

    def __bool__(self):
        return True

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __repr__(self):
        return f"Gaussian({self.real}, {self.imag})"


def _is_scalar(x) -> bool:
    return isinstance(x, (Gaussian, int, Fraction))


def _parts(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, Gaussian):
        return x.real, x.imag
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0)
    raise TypeError(f"not an exact coefficient: {x!r}")


def gaussian(real, imag=0):
    """Build an exact coefficient; returns a Fraction when ``imag == 0``."""
    if imag == 0:
        return Fraction(real)
    return Gaussian(real, imag)


I = Gaussian(0, 1)


def _exact(c):
    if isinstance(c, (Gaussian, Fraction)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, complex):
        raise TypeError("floating complex coefficients are not allowed; use Gaussian")
    if isinstance(c, float):
        raise TypeError("floating coefficients are not allowed; use Fraction")
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def conj(c):
    return c.conjugate() if isinstance(c, Gaussian) else c


# ---------------------------------------------------------------------------
# Layouts
# ---------------------------------------------------------------------------


class Segment(NamedTuple):
    """One coordinate block: ``Segment("complex", M)`` is C^M, ``Segment("real", N)`` is R^N.

    As a sphere descriptor it names the unit sphere S^{2M-1} or S^{N-1}.
    """

    kind: str
    n: int

    @property
    def width(self) -> int:
        return 2 * self.n if self.kind == "complex" else self.n

    @property
    def real_dim(self) -> int:
        return self.width


def complex_layout(M: int) -> tuple[Segment, ...]:
    return (Segment("complex", M),)


def real_layout(N: int) -> tuple[Segment, ...]:
    return (Segment("real", N),)


def _check_layout(layout) -> tuple[Segment, ...]:
    layout = tuple(Segment(*s) for s in layout)
    for s in layout:
        if s.kind not in ("complex", "real") or s.n < 1:
            raise ValueError(f"bad segment {s}")
    return layout


def _offsets(layout) -> list[int]:
    out, o = [], 0
    for s in layout:
        out.append(o)
        o += s.width
    return out


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


class Poly:
    """Immutable exact polynomial on a coordinate layout.

    Build polynomials from the helpers (:func:`z`, :func:`zbar`, :func:`modsq`,
    :func:`x`, :func:`r2`, :meth:`Poly.const`) and ordinary arithmetic.
    """

    __slots__ = ("layout", "terms", "_hash")

    def __init__(self, terms: dict | None, layout: Sequence[Segment]):
        self.layout = _check_layout(layout)
        width = sum(s.width for s in self.layout)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != width or min(e, default=0) < 0:
                raise ValueError(f"exponent {e} does not fit layout {self.layout}")
            c = _exact(c)
            if c != 0:
                clean[e] = c
        self.terms = clean
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict, layout: tuple[Segment, ...]) -> "Poly":
        p = object.__new__(cls)
        p.layout = layout
        p.terms = {e: c for e, c in terms.items() if c != 0}
        p._hash = None
        return p

    @classmethod
    def zero(cls, layout) -> "Poly":
        return cls({}, layout)

    @classmethod
    def const(cls, c, layout) -> "Poly":
        layout = _check_layout(layout)
        return cls({(0,) * sum(s.width for s in layout): c}, layout)

    @property
    def width(self) -> int:
        return sum(s.width for s in self.layout)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.layout != self.layout:
                raise LayoutMismatchError(f"{self.layout} vs {other.layout}")
            return other
        return Poly.const(_exact(other), self.layout)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly._raw(out, self.layout)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.layout)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _exact(other)
            return Poly._raw({e: c * v for e, v in self.terms.items()}, self.layout)
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _exact(other)
        return Poly._raw({e: v / c for e, v in self.terms.items()}, self.layout)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.layout)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.layout == other.layout and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.layout, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Poly({serialize(self)!r}, layout={self.layout})"

    # structure ------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def segment_exponents(self, e: tuple[int, ...]) -> Iterator[tuple[Segment, tuple[int, ...]]]:
        for s, o in zip(self.layout, _offsets(self.layout)):
            yield s, e[o:o + s.width]

    def bidegrees(self) -> set[tuple[int, int]]:
        """Set of (|alpha|, |beta|) over all terms; single complex segment only."""
        if len(self.layout) != 1 or self.layout[0].kind != "complex":
            raise LayoutMismatchError("bidegree needs a single complex segment")
        M = self.layout[0].n
        return {(sum(e[:M]), sum(e[M:])) for e in self.terms}

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def bidegree(self) -> tuple[int, int]:
        """The common bidegree; raises :class:`DegreeMismatchError` if not bihomogeneous."""
        bd = self.bidegrees()
        if len(bd) > 1:
            raise DegreeMismatchError(f"not bihomogeneous: bidegrees {sorted(bd)}")
        return bd.pop() if bd else (0, 0)

    def conjugate(self) -> "Poly":
        """Complex conjugate as a function: swaps z and zbar exponents."""
        out = {}
        for e, c in self.terms.items():
            parts = []
            for s, ex in self.segment_exponents(e):
                if s.kind == "complex":
                    parts.append(ex[s.n:] + ex[:s.n])
                else:
                    parts.append(ex)
            out[tuple(itertools.chain.from_iterable(parts))] = conj(c)
        return Poly._raw(out, self.layout)

    def is_real_valued(self) -> bool:
        return self.conjugate() == self

    def derivative(self, index: int) -> "Poly":
        """Partial derivative in flat variable ``index`` (for complex segments
        index o+j is d/dz_j and o+M+j is d/dzbar_j)."""
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                f = list(e)
                f[index] = k - 1
                f = tuple(f)
                out[f] = out.get(f, 0) + k * c
        return Poly._raw(out, self.layout)

    def euler(self, segment: int = 0) -> "Poly":
        """Radial derivative ``sum_i x_i d/dx_i`` restricted to one segment.

        For a complex segment this is ``sum z_j d/dz_j + zbar_j d/dzbar_j``;
        on a monomial it multiplies by the segment's total degree.
        """
        s = self.layout[segment]
        o = _offsets(self.layout)[segment]
        return Poly._raw(
            {e: c * sum(e[o:o + s.width]) for e, c in self.terms.items()}, self.layout
        )

    def substitute_sign(self, segment: int) -> "Poly":
        """Pull back under the antipodal map of one segment (x -> -x)."""
        s = self.layout[segment]
        o = _offsets(self.layout)[segment]
        return Poly._raw(
            {e: (-c if sum(e[o:o + s.width]) % 2 else c) for e, c in self.terms.items()},
            self.layout,
        )

    def pullback(self, layout, slot: int) -> "Poly":
        """Embed a single-segment polynomial as a function of segment ``slot`` of ``layout``."""
        layout = _check_layout(layout)
        if len(self.layout) != 1 or layout[slot] != self.layout[0]:
            raise LayoutMismatchError(f"cannot pull {self.layout} back into slot {slot} of {layout}")
        offs = _offsets(layout)
        width = sum(s.width for s in layout)
        out = {}
        for e, c in self.terms.items():
            f = [0] * width
            f[offs[slot]:offs[slot] + len(e)] = e
            out[tuple(f)] = c
        return Poly._raw(out, layout)

    def evaluate(self, point: Sequence):
        return evaluate(self, point)


# ---------------------------------------------------------------------------
# Coordinate helpers
# ---------------------------------------------------------------------------


def z(j: int, M: int) -> Poly:
    """Holomorphic coordinate z_j (1-based) on C^M."""
    e = [0] * (2 * M)
    e[j - 1] = 1
    return Poly._raw({tuple(e): Fraction(1)}, complex_layout(M))


def zbar(j: int, M: int) -> Poly:
    e = [0] * (2 * M)
    e[M + j - 1] = 1
    return Poly._raw({tuple(e): Fraction(1)}, complex_layout(M))


def modsq(j: int, M: int) -> Poly:
    """|z_j|^2 on C^M."""
    e = [0] * (2 * M)
    e[j - 1] = e[M + j - 1] = 1
    return Poly._raw({tuple(e): Fraction(1)}, complex_layout(M))


def x(j: int, N: int) -> Poly:
    """Real coordinate x_j (1-based) on R^N."""
    e = [0] * N
    e[j - 1] = 1
    return Poly._raw({tuple(e): Fraction(1)}, real_layout(N))


def r2(layout) -> Poly:
    """Squared radius of the whole layout (sum over every segment)."""
    layout = _check_layout(layout)
    out = Poly.zero(layout)
    for slot, s in enumerate(layout):
        if s.kind == "complex":
            seg = sum((modsq(j, s.n) for j in range(1, s.n + 1)), Poly.zero(complex_layout(s.n)))
        else:
            seg = sum((x(j, s.n) ** 2 for j in range(1, s.n + 1)), Poly.zero(real_layout(s.n)))
        out = out + (seg if len(layout) == 1 else seg.pullback(layout, slot))
    return out


def hermitian_poly(lam: Sequence) -> Poly:
    """The diagonal form ``sum lam_i |z_i|^2`` on C^len(lam)."""
    M = len(lam)
    return Poly._raw(
        {tuple(1 if k in (i, M + i) else 0 for k in range(2 * M)): _exact(c) for i, c in enumerate(lam)},
        complex_layout(M),
    )


# ---------------------------------------------------------------------------
# Core operations
# ---------------------------------------------------------------------------


def multiply(p: Poly, q: Poly) -> Poly:
    """Exact product; bidegrees add."""
    if p.layout != q.layout:
        raise LayoutMismatchError(f"{p.layout} vs {q.layout}")
    out: dict = {}
    for e, c in p.terms.items():
        for f, d in q.terms.items():
            g = tuple(a + b for a, b in zip(e, f))
            out[g] = out.get(g, 0) + c * d
    return Poly._raw(out, p.layout)


def flat_laplacian(p: Poly) -> Poly:
    """Positive flat Laplacian, segment by segment.

    Complex segments use ``-4 sum_j d/dz_j d/dzbar_j``, real segments
    ``-sum_i d^2/dx_i^2``.
    """
    out: dict = {}

    def add(e, c):
        out[e] = out.get(e, 0) + c

    for o, s in zip(_offsets(p.layout), p.layout):
        for e, c in p.terms.items():
            if s.kind == "complex":
                for j in range(s.n):
                    a, b = o + j, o + s.n + j
                    if e[a] and e[b]:
                        f = list(e)
                        f[a] -= 1
                        f[b] -= 1
                        add(tuple(f), -4 * e[a] * e[b] * c)
            else:
                for i in range(o, o + s.n):
                    if e[i] >= 2:
                        f = list(e)
                        f[i] -= 2
                        add(tuple(f), -e[i] * (e[i] - 1) * c)
    return Poly._raw(out, p.layout)


def ambient_grad_sq(p: Poly, segment: int = 0) -> Poly:
    """|grad p|^2 in the flat metric of one segment, for real-valued p.

    Complex segments: ``4 sum_j dp/dz_j * dp/dzbar_j``.
    """
    s = p.layout[segment]
    o = _offsets(p.layout)[segment]
    out = Poly.zero(p.layout)
    if s.kind == "complex":
        for j in range(s.n):
            out = out + 4 * p.derivative(o + j) * p.derivative(o + s.n + j)
    else:
        for i in range(o, o + s.n):
            d = p.derivative(i)
            out = out + d * d
    return out


def evaluate(p: Poly, point: Sequence):
    """Evaluate at a point given as one coordinate per real coordinate or per
    complex coordinate (conjugates are taken internally).

    Exact inputs (int, Fraction, Gaussian) give exact output.
    """
    n_coords = sum(s.n for s in p.layout)
    if len(point) != n_coords:
        raise LayoutMismatchError(f"point has {len(point)} coordinates, layout needs {n_coords}")
    flat = []
    k = 0
    for s in p.layout:
        vals = list(point[k:k + s.n])
        k += s.n
        if s.kind == "complex":
            flat.extend(vals)
            flat.extend(v.conjugate() for v in vals)
        else:
            flat.extend(vals)
    total = 0
    for e, c in p.terms.items():
        term = c
        for v, a in zip(flat, e):
            if a:
                term = term * v ** a
        total = total + term
    return total


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------


def solve_exact(columns: Sequence[dict], target: dict) -> list:
    """Solve ``sum_k c_k columns[k] = target`` for sparse vectors over Q(i).

    Vectors are dicts from an arbitrary hashable row key to an exact scalar.
    Raises ``ValueError`` when the columns are dependent or the target is
    outside their span.
    """
    keys = sorted({k for col in columns for k in col} | set(target), key=repr)
    ncol = len(columns)
    rows = [[col.get(k, 0) for col in columns] + [target.get(k, 0)] for k in keys]
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            raise ValueError("columns are linearly dependent")
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(r)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][ncol] != 0:
            raise ValueError("target is not in the span of the columns")
    return [_exact(rows[i][ncol]) if rows[i][ncol] != 0 else Fraction(0) for i in pivots]


# ---------------------------------------------------------------------------
# Harmonic decomposition
# ---------------------------------------------------------------------------


class HarmonicSplit(NamedTuple):
    """``p = harmonic + r^2 * remainder`` with ``flat_laplacian(harmonic) == 0``."""

    harmonic: Poly
    remainder: Poly


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    for cut in itertools.combinations_with_replacement(range(parts), total):
        e = [0] * parts
        for i in cut:
            e[i] += 1
        yield tuple(e)


def monomial_basis(layout, degree) -> list[tuple[int, ...]]:
    """Exponent tuples spanning P_{k,l} (complex, ``degree=(k, l)``) or P_d (real)."""
    (s,) = _check_layout(layout)
    if s.kind == "complex":
        k, l = degree
        return [a + b for a in _compositions(k, s.n) for b in _compositions(l, s.n)]
    return list(_compositions(degree, s.n))


def harmonic_decompose(p: Poly) -> HarmonicSplit:
    """Split a (bi)homogeneous polynomial into its harmonic part and an r^2 multiple.

    The remainder q is found by solving ``flat_laplacian(r^2 q) = flat_laplacian(p)``
    on the monomial basis of the degree-lowered space, which is square and
    invertible.
    """
    if len(p.layout) != 1:
        raise LayoutMismatchError("harmonic decomposition needs a single segment")
    (s,) = p.layout
    if s.kind == "complex":
        k, l = p.bidegree()
        if k == 0 or l == 0:
            return HarmonicSplit(p, Poly.zero(p.layout))
        qdeg = (k - 1, l - 1)
    else:
        degs = p.degrees()
        if len(degs) > 1:
            raise DegreeMismatchError(f"not homogeneous: degrees {sorted(degs)}")
        d = degs.pop() if degs else 0
        if d < 2:
            return HarmonicSplit(p, Poly.zero(p.layout))
        qdeg = d - 2
    lap = flat_laplacian(p)
    if not lap:
        return HarmonicSplit(p, Poly.zero(p.layout))
    rr = r2(p.layout)
    basis = monomial_basis(p.layout, qdeg)
    columns = [flat_laplacian(rr * Poly._raw({e: Fraction(1)}, p.layout)).terms for e in basis]
    coeffs = solve_exact(columns, lap.terms)
    q = Poly._raw(dict(zip(basis, coeffs)), p.layout)
    return HarmonicSplit(p - rr * q, q)


# ---------------------------------------------------------------------------
# Canonical text form
# ---------------------------------------------------------------------------


def _var_names(layout) -> list[str]:
    names = []
    multi = len(layout) > 1
    for idx, s in enumerate(layout, start=1):
        pre = f"{idx}_" if multi else ""
        if s.kind == "complex":
            names += [f"z{pre}{j}" for j in range(1, s.n + 1)]
            names += [f"zb{pre}{j}" for j in range(1, s.n + 1)]
        else:
            names += [f"x{pre}{j}" for j in range(1, s.n + 1)]
    return names


def _fmt_frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def format_coefficient(c) -> str:
    if isinstance(c, Gaussian):
        im = c.imag
        sign = "-" if im < 0 else "+"
        return f"({_fmt_frac(c.real)}{sign}{_fmt_frac(abs(im))}i)"
    return _fmt_frac(Fraction(c))


def serialize(p: Poly) -> str:
    """Canonical text: grlex-descending terms, ``p/q`` coefficients.

    >>> serialize(modsq(1, 2) - modsq(2, 2))
    '1/1*z1*zb1 - 1/1*z2*zb2'
    """
    if not p.terms:
        return "0"
    names = _var_names(p.layout)
    chunks = []
    for n, (e, c) in enumerate(p.sorted_terms()):
        factors = [nm if a == 1 else f"{nm}^{a}" for nm, a in zip(names, e) if a]
        if isinstance(c, Gaussian) or c > 0:
            sign, body = "+", format_coefficient(c)
        else:
            sign, body = "-", format_coefficient(-c)
        text = "*".join([body] + factors)
        if n == 0:
            chunks.append(text if sign == "+" else "-" + text)
        else:
            chunks.append(f" {sign} {text}")
    return "".join(chunks)


_GAUSS_RE = re.compile(r"^\((-?\d+/\d+)([+-])(\d+/\d+)i\)$")


def parse(text: str, layout) -> Poly:
    """Inverse of :func:`serialize` for a known layout."""
    layout = _check_layout(layout)
    text = text.strip()
    if text == "0":
        return Poly.zero(layout)
    index = {nm: i for i, nm in enumerate(_var_names(layout))}
    width = len(index)
    terms: dict = {}
    # tokens separated by " + " / " - " outside parentheses
    tokens, depth, cur = [], 0, ""
    sign = "+"
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and text[i - 1:i] == " " and text[i + 1:i + 2] == " ":
            tokens.append((sign, cur.strip()))
            sign, cur = ch, ""
            i += 2
            continue
        cur += ch
        i += 1
    tokens.append((sign, cur.strip()))
    for sign, tok in tokens:
        if tok.startswith("-"):
            sign = "-" if sign == "+" else "+"
            tok = tok[1:]
        head, *facs = tok.split("*")
        m = _GAUSS_RE.match(head)
        if m:
            im = Fraction(m.group(3)) * (1 if m.group(2) == "+" else -1)
            c = gaussian(Fraction(m.group(1)), im)
        else:
            c = Fraction(head)
        if sign == "-":
            c = -c
        e = [0] * width
        for f in facs:
            nm, _, pw = f.partition("^")
            if nm not in index:
                raise ValueError(f"unknown variable {nm!r}")
            e[index[nm]] += int(pw) if pw else 1
        e = tuple(e)
        terms[e] = terms.get(e, 0) + c
    return Poly(terms, layout)


def iter_monomials(p: Poly) -> Iterable[tuple[tuple[int, ...], object]]:
    return p.sorted_terms()
