"""Command line entry point: one computation per invocation.

Exit status is 0 on success, 1 on invalid input and 2 when a resource cap
would be exceeded.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cellio
from .complexes import homology, poincare_series
from .errors import NotAField, ResourceCapExceeded, SpecSeqError
from .filtered import extension_tower, infinity_page, page, stabilization_index
from .formal import check_target, diagonal_extensions, forced_zero_scan, turn_to
from .groups import GroupModule, cohomology_range, lhs_row_spectral_sequence, lhs_spectral_sequence
from .rings import Ring


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_homology(args) -> None:
    C = cellio.load_complex(args.input)
    H = homology(C)
    if args.render == "json":
        _out(cellio.dumps({"ring": cellio.ring_name(C.ring),
                           "homology": {str(n): list(f) for n, f in H.factors().items()}}))
    else:
        for n, label in H.labels().items():
            _out(f"H_{n} = {label}" if not C.cohomological else f"H^{n} = {label}")


def _render_pages(FC, rs, args, max_total=None) -> None:
    for r in rs:
        pg = page(FC, r)
        if max_total is not None:
            pg = cellio.restrict_page(pg, max_total)
        _out(cellio.render_chart(pg, args.render, arrows=args.arrows))


def cmd_pages(args) -> None:
    FC = cellio.load_filtered(args.input)
    rs = [args.r] if args.r is not None else range(stabilization_index(FC) + 1)
    _render_pages(FC, rs, args)


def cmd_einf(args) -> None:
    FC = cellio.load_filtered(args.input)
    E = infinity_page(FC)
    _out(cellio.render_chart(E, args.render))
    if args.render == "ascii":
        for n in sorted({p + q for p, q in E.factors()}):
            T = extension_tower(FC, n, E)
            state = "resolved" if T.resolved else "ambiguous"
            _out(f"degree {n}: {', '.join(T.labels())} ({state})")


def cmd_extensions(args) -> None:
    data = cellio._read(args.input)
    if cellio.sniff_kind(data) == "formal":
        P = cellio.load_formal(data)
        T = diagonal_extensions(turn_to(P, args.turn_to) if args.turn_to else P, args.degree)
    else:
        T = extension_tower(cellio.load_filtered(data), args.degree)
    _out(f"degree {args.degree}: {', '.join(T.labels())}")
    _out("resolved" if T.resolved else f"{len(T.candidates)} candidates")


def cmd_lhs(args) -> None:
    _, E = cellio.load_group(args.input)
    if E is None:
        raise SpecSeqError("group file has no 'normal' subgroup")
    build = lhs_row_spectral_sequence if args.filtration == "row" else lhs_spectral_sequence
    FC = build(E, Ring.parse(args.ring), args.truncate)
    rs = [args.r] if args.r is not None else [2]
    _render_pages(FC, rs, args, max_total=args.truncate - 1)
    if args.render == "ascii":
        _out(f"certified total degrees: 0..{args.truncate - 1}")


def cmd_formal(args) -> None:
    P = cellio.load_formal(args.input)
    scan = forced_zero_scan(P)
    if args.turn_to:
        P = turn_to(P, args.turn_to)
        scan = forced_zero_scan(P)
    _out(cellio.render_chart(P, args.render, arrows=args.arrows))
    if args.render == "ascii":
        for r, items in scan.unforced.items():
            if items:
                _out(f"unforced d_{r}: " + ", ".join(f"({s[0]},{s[1]})->({t[0]},{t[1]})" for s, t in items))
        _out(scan.verdict())
        if P.target and not scan.collapses:
            _out(f"target check skipped: E_{P.r} has not collapsed (try --turn-to {scan.collapse_page or P.r + 1})")
        elif P.target:
            chk = check_target(P)
            for n, (ok, cands, want) in chk.per_degree.items():
                _out(f"target degree {n}: {want} {'consistent' if ok else 'INCONSISTENT'} (candidates {', '.join(cands)})")


def cmd_poincare(args) -> None:
    data = cellio._read(args.input)
    kind = cellio.sniff_kind(data)
    if kind == "group":
        G, _ = cellio.load_group(data)
        ring = Ring.parse(args.ring)
        if not ring.is_field:
            raise NotAField(f"Poincaré series needs field coefficients, got {ring}")
        H = cohomology_range(G, GroupModule.trivial(G, ring), args.max)
        coeffs = [H[n].dimension for n in range(args.max + 1)]
    else:
        coeffs = poincare_series(homology(cellio.load_complex(data)), args.max)
    _out(json.dumps(coeffs))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="specseq", description="Exact spectral sequence computations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def render(p, arrows=True):
        p.add_argument("--render", choices=("ascii", "json"), default="ascii")
        if arrows:
            p.add_argument("--arrows", action="store_true", help="list nonzero differentials")

    p = sub.add_parser("homology", help="homology of a complex")
    p.add_argument("input")
    render(p, arrows=False)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("pages", help="pages of a filtered complex")
    p.add_argument("input")
    p.add_argument("--r", type=int)
    render(p)
    p.set_defaults(func=cmd_pages)

    p = sub.add_parser("einf", help="E_infinity page and extension data")
    p.add_argument("input")
    render(p, arrows=False)
    p.set_defaults(func=cmd_einf)

    p = sub.add_parser("extensions", help="extension candidates in one total degree")
    p.add_argument("input")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--turn-to", type=int, help="for formal pages, turn to this page first")
    p.set_defaults(func=cmd_extensions)

    p = sub.add_parser("lhs", help="LHS spectral sequence of a group extension")
    p.add_argument("input")
    p.add_argument("--ring", default="F2")
    p.add_argument("--truncate", type=int, default=5)
    p.add_argument("--r", type=int)
    p.add_argument("--filtration", choices=("column", "row"), default="column")
    render(p)
    p.set_defaults(func=cmd_lhs)

    p = sub.add_parser("formal", help="scan and turn a formal page")
    p.add_argument("input")
    p.add_argument("--turn-to", type=int)
    render(p)
    p.set_defaults(func=cmd_formal)

    p = sub.add_parser("poincare", help="Poincaré coefficients over a field")
    p.add_argument("input")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--ring", default="F2", help="coefficients for group files")
    p.set_defaults(func=cmd_poincare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ResourceCapExceeded as exc:
        print(f"specseq: resource cap: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"specseq: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
