"""Command-line front end: ``tribrackets <subcommand> ...``.

Exit codes: 0 on success, 1 for domain errors (invalid or non-entropic
tables and the like), 2 for usage and parse errors.
"""
from __future__ import annotations

import argparse
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .algebra import (TribracketError, idempotent_number, make_alexander, make_dehn,
                      parse_group_spec, validate)
from .colorings import enumerate_colorings, link_homset_tribracket
from .diagrams import CONVENTIONS, DEFAULT_CONVENTION, Diagram, read_pd
from .enumeration import (LONG_RUNNING_ORDER, ClassRegistry, classify, enumerate_tribrackets,
                          format_product_table, product_table)
from .formats import (FormatError, bundled_tensor, data_path, format_census, format_homset,
                      format_legend, format_tensor, named_classes, read_census, read_tensor)
from .morphisms import are_isomorphic, enumerate_hom_images, homset_tribracket


class UsageError(Exception):
    pass


# --- input resolution -------------------------------------------------------------

def load_tensor(arg: str):
    """A tensor file path, a bundled file name, or a bundled label such as ``T3^1``."""
    path = Path(arg)
    if path.exists():
        return read_tensor(path)
    bundled = data_path("tensors", arg)
    if arg.endswith(".tensor") and bundled.exists():
        return read_tensor(bundled)
    try:
        return bundled_tensor(arg)
    except KeyError:
        raise UsageError(f"{arg}: no such tensor file or bundled label") from None


def load_diagrams(arg: str, name: str | None = None) -> list[Diagram]:
    """A PD file path, or a bundled file name such as ``knots`` or ``trefoil.pd``."""
    path = Path(arg)
    if not path.exists():
        bundled = data_path("pd", arg if arg.endswith(".pd") else arg + ".pd")
        if not bundled.exists():
            raise UsageError(f"{arg}: no such PD file or bundled diagram set")
        path = bundled
    diagrams = read_pd(path)
    if name is not None:
        diagrams = [D for D in diagrams if D.name == name]
        if not diagrams:
            raise UsageError(f"{path}: no diagram named {name!r}")
    return diagrams


def name_key(name: str):
    """Sort key comparing digit runs numerically, so ``8_2`` precedes ``8_10``."""
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def default_registry() -> ClassRegistry:
    return ClassRegistry([*named_classes(), bundled_tensor("T4^1")])


# --- subcommands ---------------------------------------------------------------------

def cmd_check(args) -> int:
    T = load_tensor(args.tensor)
    report = validate(T)
    parts = []
    for key, ok in (("i", report.axiom_i_ok), ("ii", report.axiom_ii_ok)):
        if ok:
            parts.append(f"axiom ({key}): ok")
        else:
            wit = report.violations[key]
            if key == "i":
                slot, i, j = wit
                detail = f"{slot} slot not a bijection at ({i + 1}, {j + 1})"
            else:
                detail = "fails at (x,y,z,w) = (" + ",".join(str(v + 1) for v in wit) + ")"
            parts.append(f"axiom ({key}): FAIL {detail}")
    if report.entropic_ok is None:
        parts.append("entropic: n/a")
    elif report.entropic_ok:
        parts.append("entropic: yes")
    else:
        wit = report.violations["entropic"]
        parts.append("entropic: no (" + ",".join(str(v + 1) for v in wit) + ")")
    print(", ".join(parts))
    return 0 if report.valid else 1


def cmd_gen(args) -> int:
    if args.kind == "alexander":
        if len(args.params) != 3:
            raise UsageError("gen alexander needs <n> <s> <t>")
        try:
            n, s, t = (int(v) for v in args.params)
        except ValueError:
            raise UsageError("gen alexander arguments must be integers") from None
        T = make_alexander(n, s, t)
    else:
        if len(args.params) != 1:
            raise UsageError("gen dehn needs one group spec, e.g. Z2xZ2, S3 or D4")
        try:
            G = parse_group_spec(args.params[0])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        T = make_dehn(G)
    sys.stdout.write(format_tensor(T))
    return 0


def _check_order(n: int, allow_long: bool) -> None:
    if n < 0:
        raise UsageError("order must be non-negative")
    if n >= LONG_RUNNING_ORDER and not allow_long:
        raise UsageError(f"order {n} takes a long time; pass --allow-long to run it anyway")


def cmd_enumerate(args) -> int:
    _check_order(args.n, args.allow_long)
    flt = "entropic" if args.entropic_only else "all"
    tables = list(enumerate_tribrackets(args.n, flt, args.jobs))
    sys.stdout.write(format_census(args.n, tables, flt, count_label="tables"))
    return 0


def cmd_classify(args) -> int:
    _check_order(args.n, args.allow_long)
    flt = "entropic" if args.entropic_only else "all"
    sys.stdout.write(format_census(args.n, classify(args.n, flt, args.jobs), flt))
    return 0


def cmd_iso(args) -> int:
    A, B = load_tensor(args.a), load_tensor(args.b)
    for T in (A, B):
        if not validate(T, entropic=False).valid:
            raise TribracketError(f"{T.name}: not a tribracket")
    cert = are_isomorphic(A, B)
    if cert is None:
        print("nonisomorphic")
    else:
        print(" ".join(str(v + 1) for v in cert.permutation))
    return 0


def _load_pair(args):
    T, X = load_tensor(args.source), load_tensor(args.target)
    for U in (T, X):
        if not validate(U, entropic=False).valid:
            raise TribracketError(f"{U.name}: not a tribracket")
    return T, X


def cmd_hom(args) -> int:
    T, X = _load_pair(args)
    images = enumerate_hom_images(T, X)
    print(f"homs={len(images)}")
    sys.stdout.write(format_legend(images))
    return 0


def cmd_homset(args) -> int:
    T, X = _load_pair(args)
    H = homset_tribracket(T, X)
    sys.stdout.write(format_homset(H.table, H.images()))
    return 0


def cmd_product_table(args) -> int:
    path = Path(args.census)
    if not path.exists():
        path = data_path("tensors", args.census)
        if not path.exists():
            raise UsageError(f"{args.census}: no such census file")
    _, tables = read_census(path)
    for T in tables:
        if not validate(T, entropic=False).valid:
            raise TribracketError(f"{path}: census entry is not a tribracket")
    registry = default_registry()
    heads, matrix, registry = product_table(tables, registry)
    sys.stdout.write(format_product_table(heads, matrix))
    return 0


def cmd_color(args) -> int:
    X = load_tensor(args.tensor)
    convention = CONVENTIONS[args.convention]
    for D in load_diagrams(args.pd, args.name):
        colorings = enumerate_colorings(D, X, convention)
        print(f"name {D.name} colorings={len(colorings)}")
        sys.stdout.write(format_legend([c.assignment for c in colorings]))
    return 0


def _homset_summary(job):
    D, X, convention = job
    H = link_homset_tribracket(D, X, convention).table
    return D.name, H


def report_lines(diagrams: Sequence[Diagram], X, convention, jobs: int = 1) -> list[str]:
    """One ``name |X| count idem_no class_label`` line per diagram, sorted by name."""
    diagrams = sorted(diagrams, key=lambda D: name_key(D.name))
    work = [(D, X, convention) for D in diagrams]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_homset_summary, work))
    else:
        results = [_homset_summary(w) for w in work]
    # labels are handed out in report order, so they do not depend on --jobs
    registry = default_registry()
    return [f"{name} {X.order} {H.order} {idempotent_number(H)} {registry.label(H)}"
            for name, H in results]


def _report(args, jobs: int) -> int:
    X = load_tensor(args.tensor)
    if not validate(X, entropic=False).valid:
        raise TribracketError(f"{X.name}: not a tribracket")
    diagrams = load_diagrams(args.pd, getattr(args, "name", None))
    for line in report_lines(diagrams, X, CONVENTIONS[args.convention], jobs):
        print(line)
    return 0


def cmd_invariant(args) -> int:
    return _report(args, jobs=1)


def cmd_batch(args) -> int:
    return _report(args, jobs=args.jobs)


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tribrackets",
        description="Finite tribrackets, their homsets and region-coloring invariants of links.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check the axioms and the entropic identity")
    p.add_argument("tensor", help="tensor file or bundled label such as T2^1")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a standard tribracket to stdout")
    p.add_argument("kind", choices=("alexander", "dehn"))
    p.add_argument("params", nargs="+", help="alexander: n s t; dehn: group spec (Z4, Z2xZ2, S3, D4)")
    p.set_defaults(func=cmd_gen)

    for name, func, help_text in (("enumerate", cmd_enumerate, "list every tribracket of order n"),
                                  ("classify", cmd_classify, "one tribracket per isomorphism class")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("n", type=int)
        p.add_argument("--entropic-only", action="store_true")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--allow-long", action="store_true",
                       help=f"permit orders >= {LONG_RUNNING_ORDER}")
        p.set_defaults(func=func)

    p = sub.add_parser("iso", help="isomorphism certificate or 'nonisomorphic'")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    for name, func, help_text in (("hom", cmd_hom, "homomorphisms from one tribracket to another"),
                                  ("homset", cmd_homset, "homset tribracket with its legend")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("source")
        p.add_argument("target")
        p.set_defaults(func=func)

    p = sub.add_parser("product-table", help="homset classes for every pair in a census")
    p.add_argument("census", help="census file, or small.census for the bundled classes")
    p.set_defaults(func=cmd_product_table)

    for name, func, help_text in (("color", cmd_color, "list region colorings"),
                                  ("invariant", cmd_invariant, "report lines for selected diagrams"),
                                  ("batch", cmd_batch, "report lines for every diagram in a file")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("pd", help="PD file or bundled set (knots, links, trefoil, ...)")
        p.add_argument("tensor")
        if name != "batch":
            p.add_argument("--name", help="only the diagram with this name")
        else:
            p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--convention", choices=sorted(CONVENTIONS), default=DEFAULT_CONVENTION.name)
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        print("tribrackets: error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"tribrackets: error: {exc}", file=sys.stderr)
        return 2
    except (TribracketError, ValueError) as exc:
        print(f"tribrackets: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
