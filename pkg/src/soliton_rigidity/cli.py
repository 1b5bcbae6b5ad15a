"""Command-line front end.

Exit codes: 0 success, 1 suite failure, 2 usage error, 3 unsupported manifold.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path

from .manifolds import (
    FubiniStudy,
    ManifoldSpecError,
    UnsupportedManifoldError,
    build_E2mu,
    parse_manifold,
)
from .moments import complex_monomial_moment, real_monomial_moment
from .obstruction import (
    analyze,
    diagonal_criterion,
    gram_tensor,
    obstruction_check_direct,
)
from .poly import format_coefficient
from .verify import IdentityFailure, McConfig, identity_suite, mc_gram_agreement

FORMATS = ("human", "structured-text", "csv")


class UsageError(Exception):
    pass


def _render(title: str, items: list[tuple[str, str]], fmt: str) -> str:
    if fmt == "structured-text":
        return "".join(f"{k}: {v}\n" for k, v in items)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(items)
        return buf.getvalue()
    width = max((len(k) for k, _ in items), default=0)
    lines = [title, "=" * len(title)]
    lines += [f"{k.ljust(width)}  {v}" for k, v in items]
    return "\n".join(lines) + "\n"


def _vector(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed vector {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"malformed exponent list {text!r}") from exc
    if any(v < 0 for v in vals):
        raise UsageError("exponents must be non-negative")
    return vals


def cmd_analyze(args) -> tuple[str, int]:
    d = parse_manifold(args.manifold)
    report = analyze(d)
    return _render(f"Rigidity report: {d.spec()}", report.items(), args.format), 0


def cmd_check(args) -> tuple[str, int]:
    d = parse_manifold(args.manifold)
    basis = build_E2mu(d)
    items = [("manifold", d.spec())]
    if args.lam is not None:
        if not isinstance(d, FubiniStudy):
            raise UsageError("--lambda needs a single CPm manifold")
        lam = _vector(args.lam)
        try:
            diag = diagonal_criterion(lam, d.m)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        verdict = obstruction_check_direct(basis.diagonal_coordinates(lam), basis, lam=tuple(lam))
        if diag.status != verdict.status:
            raise AssertionError("diagonal criterion and direct check disagree")
        items += verdict.items()
        items.append(("diagonal_criterion", diag.status.value))
        if diag.obstructed:
            items.append(("diagonal_criterion_witness", diag.witness_label))
            items.append(("diagonal_criterion_value", format_coefficient(diag.value)))
    else:
        coords = _vector(args.coords)
        if len(coords) != len(basis):
            raise UsageError(f"{d.spec()} needs {len(basis)} coordinates, got {len(coords)}")
        try:
            verdict = obstruction_check_direct(coords, basis)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        items += verdict.items()
    return _render(f"Obstruction check: {d.spec()}", items, args.format), 0


def cmd_verify(args) -> tuple[str, int]:
    d = parse_manifold(args.manifold)
    cfg = McConfig(samples=args.samples, seed=args.seed)
    try:
        suite = identity_suite(d, seed=args.seed)
    except IdentityFailure as exc:
        return _render(f"Verification: {d.spec()}", [("manifold", d.spec()), ("failure", str(exc))], args.format), 1
    suite.mc = mc_gram_agreement(build_E2mu(d), cfg)
    items = [("seed", str(cfg.seed)), ("samples", str(cfg.samples)), ("sigmas", str(cfg.sigmas))] + suite.lines()
    return _render(f"Verification: {d.spec()}", items, args.format), 0 if suite.passed else 1


def cmd_gram(args) -> tuple[str, int]:
    d = parse_manifold(args.manifold)
    T = gram_tensor(build_E2mu(d))
    if args.format == "csv":
        return T.to_csv(), 0
    items = [
        ("manifold", d.spec()),
        ("dimension", str(T.dim)),
        ("entries", str(len(T.entries))),
        ("nonzero_entries", str(len(T.nonzero()))),
    ]
    labels = T.basis.labels
    for (a, b, c), val in sorted(T.nonzero().items()):
        items.append((f"T[{a}][{b}][{c}]", f"{format_coefficient(val)}  ({labels[a]}, {labels[b]}, {labels[c]})"))
    return _render(f"Cubic Gram tensor: {d.spec()}", items, args.format), 0


def cmd_moments(args) -> tuple[str, int]:
    if args.complex is not None:
        M = args.complex
        alpha = _ints(args.exponents[0])
        beta = _ints(args.exponents[1]) if len(args.exponents) > 1 else alpha
        if len(alpha) != M or len(beta) != M:
            raise UsageError(f"exponent vectors must have length {M}")
        value = complex_monomial_moment(M, alpha, beta)
        items = [("sphere", f"S^{2 * M - 1} in C^{M}"), ("alpha", args.exponents[0]),
                 ("beta", ",".join(map(str, beta))), ("moment", format_coefficient(value))]
    else:
        N = args.real
        a = _ints(args.exponents[0])
        if len(a) != N or len(args.exponents) > 1:
            raise UsageError(f"give one exponent vector of length {N}")
        value = real_monomial_moment(N, a)
        items = [("sphere", f"S^{N - 1} in R^{N}"), ("exponents", args.exponents[0]),
                 ("moment", format_coefficient(value))]
    if args.format == "human":
        return f"{value.numerator}/{value.denominator}\n", 0
    return _render("Moment", items, args.format), 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="soliton-rigidity",
        description="Exact second-order obstruction analysis for Einstein metrics viewed as Ricci solitons.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=FORMATS, default="human")
        sp.add_argument("--out", type=Path, help="write output to this file instead of stdout")

    sp = sub.add_parser("analyze", help="full rigidity report")
    sp.add_argument("manifold")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("check", help="obstruction verdict for one deformation")
    sp.add_argument("manifold")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--lambda", dest="lam", help="diagonal entries, e.g. 1,1,-2")
    g.add_argument("--coords", help="coordinates in the E(2mu) basis")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("verify", help="exact identity suite plus Monte-Carlo agreement")
    sp.add_argument("manifold")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=1_000_000)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gram", help="dump the cubic Gram tensor")
    sp.add_argument("manifold")
    common(sp)
    sp.set_defaults(func=cmd_gram)

    sp = sub.add_parser("moments", help="normalized sphere moment of one monomial")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--complex", type=int, metavar="M", help="C^M; exponents alpha [beta]")
    g.add_argument("--real", type=int, metavar="N", help="R^N; one exponent vector")
    sp.add_argument("exponents", nargs="+")
    common(sp)
    sp.set_defaults(func=cmd_moments)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 10_000) < 10_000:
        parser.error("--samples must be at least 10000")
    try:
        text, code = args.func(args)
    except (ManifoldSpecError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedManifoldError as exc:
        print(f"unsupported manifold: {exc}", file=sys.stderr)
        return 3
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
