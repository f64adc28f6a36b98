"""``perfrel`` command line: one verb per capability, exact rational output."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .catalog import ALIASES, ENTRY_NAMES, CatalogError, load_entry, verify_entry, watson_lattice
from .exactla import RationalMatrix, solve
from .files import MalformedInput, parse_lattice, parse_relation
from .lattice import LatticeError, minimal_vectors
from .perfection import (
    RelationError,
    TwoBasisRelation,
    perfection_rank,
    relation_from_split,
    relation_space,
    split_two_sided,
)
from .quotient import (
    classify_regularity,
    extract_code,
    match_classification,
    nu_statistics,
    quotient_structure,
    relation_quotient,
)
from .verify import run_checks
from .watson import WatsonError, watson_condition_checks, watson_defect, watson_relation

EXIT_MALFORMED = 1
EXIT_MATH = 2


class Printer:
    def __init__(self, approx: bool, out=None):
        self.approx = approx
        self.out = out or sys.stdout

    def q(self, x) -> str:
        x = Fraction(x)
        s = str(x)
        if self.approx and x.denominator != 1:
            s += f" (~{float(x):.6g})"
        return s

    def vec(self, v) -> str:
        return "[" + ", ".join(str(Fraction(x)) for x in v) + "]"

    def __call__(self, *parts):
        print(*parts, file=self.out)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def _lattice(path):
    return parse_lattice(_read(path))


def _two_basis(L, rel_path) -> TwoBasisRelation:
    rel = parse_relation(_read(rel_path))
    split = split_two_sided(rel)
    if len(split.left) != L.n or len(split.right) != L.n:
        raise RelationError(f"each side needs exactly n = {L.n} lines")
    return relation_from_split(L, split)


def cmd_minvec(args, p: Printer):
    S = minimal_vectors(_lattice(args.file))
    p("min", p.q(S.min))
    p("s", S.s)
    for v in S.vectors:
        p(p.vec(v))


def cmd_perf(args, p: Printer):
    L = _lattice(args.file)
    prof = perfection_rank(minimal_vectors(L).vectors)
    p("n", prof.n)
    p("s", prof.s)
    p("r", prof.r)
    p("relation_dim", prof.relation_dim)
    p("cell_dim", prof.cell_dim)
    p("perfect", "yes" if prof.perfect else "no")


def cmd_relations(args, p: Printer):
    L = _lattice(args.file)
    rels = relation_space(minimal_vectors(L).vectors)
    p("relation_dim", len(rels))
    for rel in rels:
        p(" + ".join(f"{p.q(c)}*{p.vec(ln.coords)}" for ln, c in zip(rel.lines, rel.coefficients)))


def _print_quotient(p, label, q):
    p(f"{label} index", q.index)
    p(f"{label} factors", q.factor_type)
    p(f"{label} annihilator", q.annihilator)
    for g in q.glue_generators:
        p(f"{label} glue", p.vec(g))
    code = extract_code(q)
    for w in code.generators:
        p(f"{label} word", "(" + ",".join(map(str, w)) + f") mod {code.modulus}")


def cmd_watson(args, p: Printer):
    L0 = _lattice(args.file)
    try:
        a = tuple(int(x) for x in args.glue.split(","))
    except ValueError as exc:
        raise MalformedInput("--glue must be comma-separated integers") from exc
    if len(a) != L0.n:
        raise WatsonError(f"--glue needs {L0.n} coefficients")
    L, w = watson_lattice(L0.gram, a, args.den, L0.label)
    rep = watson_defect(w)
    p("A", w.A)
    p("d", w.d)
    p("defect", rep.defect)
    p("gaps", "[" + ", ".join(p.q(g) for g in rep.gaps) + "]")
    p("identity", "holds" if rep.identity_holds else "FAILS")
    for v in rep.violations:
        p("violation", v)
    if rep.defect == 0 and not rep.violations:
        cond = watson_condition_checks(w)
        p("condition", "pass" if cond.passed else "fail")
        for v in cond.violations:
            p("violation", v)
        rel = watson_relation(w)
        # report vectors on the f-basis of the input file
        fb = RationalMatrix.from_columns(w.normalized().basis)

        def on_f(v):
            return p.vec(solve(fb, v))

        if isinstance(rel, TwoBasisRelation):
            p("relation", " + ".join(f"{c}*p{on_f(v)}" for c, v in zip(rel.lam, rel.e)), "=",
              " + ".join(f"{c}*p{on_f(v)}" for c, v in zip(rel.lam_prime, rel.e_prime)))
        else:
            p("relation", " + ".join(f"{p.q(c)}*{on_f(ln.coords)}" for ln, c in zip(rel.lines, rel.coefficients)))
    elif rep.defect != 0:
        p("watson_condition", "no")


def cmd_quotient(args, p: Printer):
    L = _lattice(args.file)
    if Path(args.sub).exists():
        rel = _two_basis(L, args.sub)
        _print_quotient(p, "left", relation_quotient(rel))
        _print_quotient(p, "right", relation_quotient(rel, prime=True))
        return
    try:
        idx = [int(x) for x in args.sub.split(",")]
    except ValueError as exc:
        raise MalformedInput("--sub must be a relation file or comma-separated indices") from exc
    S = minimal_vectors(L).vectors
    if any(i < 0 or i >= len(S) for i in idx):
        raise MalformedInput(f"indices must lie in 0..{len(S) - 1}")
    identity = [tuple(int(i == k) for k in range(L.n)) for i in range(L.n)]
    _print_quotient(p, "quotient", quotient_structure(identity, [S[i] for i in idx]))


def cmd_classify(args, p: Printer):
    L = _lattice(args.file)
    rel = _two_basis(L, args.relation)
    v = classify_regularity(rel)
    nu = nu_statistics(rel)
    p("label", match_classification(rel))
    p("regularity", v.verdict)
    p("d", v.d, "d'", v.d_prime)
    p("nu", " ".join(f"{d}:{k}" for d, k in nu.nu.items()))
    p("nu_inequality", "holds" if nu.holds else "fails", f"({nu.lhs} <= {nu.rhs})")


def cmd_catalog(args, p: Printer):
    if args.name in ("list", None):
        for name in ENTRY_NAMES:
            p(name)
        return
    if args.name not in ENTRY_NAMES and args.name not in ALIASES:
        raise CatalogError(f"unknown catalog entry {args.name!r}")
    e = load_entry(args.name)
    p("name", e.name)
    p("n", e.lattice.n)
    p("tags", ",".join(e.tags))
    for k, v in verify_entry(e).items():
        p(k, p.q(v) if isinstance(v, Fraction) else v)
    for rel in e.relations:
        p("lambda", " ".join(map(str, rel.lam)))
        p("lambda'", " ".join(map(str, rel.lam_prime)))
        p("label", match_classification(rel))
    if e.notes:
        p("note", e.notes)


def cmd_verify(args, p: Printer) -> int:
    results = run_checks(args.only)
    if args.json:
        p(json.dumps(results, indent=2))
    else:
        for r in results:
            p(f"{r['status'].upper():4s}  {r['check']}")
            if r["status"] != "pass":
                p(f"      expected {r['expected']}")
                p(f"      actual   {r['actual']}")
        passed = sum(r["status"] == "pass" for r in results)
        p(f"{passed}/{len(results)} checks passed")
    return 0 if results and all(r["status"] == "pass" for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="perfrel", description="Perfection relations of Euclidean lattices.")
    ap.add_argument("--approx", action="store_true", help="append decimal hints to rational output")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("minvec", help="minimal vectors of a lattice file")
    s.add_argument("file")
    s.set_defaults(func=cmd_minvec)

    s = sub.add_parser("perf", help="perfection rank and related counts")
    s.add_argument("file")
    s.set_defaults(func=cmd_perf)

    s = sub.add_parser("relations", help="basis of the perfection relations on the minimal lines")
    s.add_argument("file")
    s.set_defaults(func=cmd_relations)

    s = sub.add_parser("watson", help="Watson defect and relation; the file holds the Gram of the f_i")
    s.add_argument("file")
    s.add_argument("--glue", required=True, help="comma-separated integers a_1,...,a_n")
    s.add_argument("--den", required=True, type=int, help="denominator d > 1")
    s.set_defaults(func=cmd_watson)

    s = sub.add_parser("quotient", help="Lambda/Lambda_0 for a relation file or minimal-vector indices")
    s.add_argument("file")
    s.add_argument("--sub", required=True, help="relation file, or 0-based indices into the minvec list")
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("classify", help="regularity and classification of a two-basis relation")
    s.add_argument("file")
    s.add_argument("--relation", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("catalog", help="show a catalog entry with re-verified invariants ('list' for names)")
    s.add_argument("name", nargs="?", default="list")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("verify-paper", help="run the reproduction suite")
    s.add_argument("--only", help="run only checks with this tag")
    s.add_argument("--json", action="store_true", help="machine-readable report")
    s.set_defaults(func=cmd_verify)
    return ap


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    p = Printer(args.approx, out)
    try:
        code = args.func(args, p)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (LatticeError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
