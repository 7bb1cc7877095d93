"""Command-line interface.

Exit status: 0 when the command succeeds and every verification passes,
1 when a verification fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import corpus
from .counting_oracle import (
    EnumerationBudget,
    count_contact_locus,
    count_points,
    fibration_fiber_counts,
    jet_law_report,
    zeta_closed_form,
)
from .errors import InputError, MotintError
from .geometry import blowup_classes
from .integrator import integrate_snc, kequiv_check, level_measure, transform_check
from .jets import ContactDatum, contact_measure
from .motive_ring import class_to_json, realize_count

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2
DEFAULT_PRECISION = 10


class UsageError(MotintError):
    pass


def _frac(x: Fraction) -> str:
    return str(x)


def _load(args, *kinds):
    if args.example and args.input:
        raise UsageError("give either --example or --input, not both")
    if args.example:
        ex = corpus.load_example(args.example)
    elif args.input:
        ex = corpus.load_document(args.input)
    else:
        raise UsageError("one of --example or --input is required")
    if ex.kind not in kinds:
        raise UsageError(f"{args.command} needs a document of kind {' or '.join(kinds)}, got {ex.kind!r}")
    return ex


def _budget(args) -> EnumerationBudget:
    return EnumerationBudget(args.max_states, args.threads)


# -- commands -----------------------------------------------------------------
# Each returns (exit_code, json_payload, human_lines).

def cmd_integrate(args):
    ex = _load(args, "snc")
    res = integrate_snc(ex.snc, args.precision)
    lines = [f"closed form: {res.closed}", f"series:      {res.series}"]
    for s, mu in res.level_measures:
        if not mu.is_zero():
            lines.append(f"  mu(ord = {s}) = {mu}")
    return EXIT_OK, {"example": ex.id, "precision": args.precision, **res.to_json()}, lines


def cmd_transform_check(args):
    ex = _load(args, "transform")
    blowup = blowup_classes(ex.lhs.ambient, ex.center)
    rep = transform_check(ex.lhs, blowup, ex.rhs, args.precision, ex.pullback_mult)
    lines = [
        f"lhs: {rep.lhs.closed}  =  {rep.lhs.series}",
        f"rhs: {rep.rhs.closed}  =  {rep.rhs.series}",
        f"discrepancy: {rep.discrepancy}",
    ]
    first = rep.first_difference()
    if first is not None:
        lines.append(f"first difference at weight {max(first[0])}: coefficient {first[1]}")
    lines += [f"note: {i}" for i in rep.issues]
    lines.append("PASSED" if rep.passed else "FAILED")
    return (EXIT_OK if rep.passed else EXIT_FAILED), {"example": ex.id, **rep.to_json()}, lines


def _chart_counts(charts, q, budget):
    return sum(count_points(s, q, budget) for s in charts)


def cmd_kequiv_check(args):
    ex = _load(args, "kequiv")
    rep = kequiv_check(ex.pair, args.precision)
    payload = {"example": ex.id, **rep.to_json()}
    lines = [
        f"K-equivalent data: {rep.k_equivalent}",
        f"left:  {rep.verification.lhs.series}",
        f"right: {rep.verification.rhs.series}",
    ]
    for side, ok in rep.motive_checks.items():
        lines.append(f"integral equals [M({side})]: {ok}")
    passed = rep.passed
    if args.q:
        budget = _budget(args)
        d = ex.pair.left.dim
        oracle = []
        for q in args.q:
            left = _chart_counts(ex.left_charts, q, budget) if ex.left_charts else None
            right = _chart_counts(ex.right_charts, q, budget) if ex.right_charts else None
            expected = realize_count(rep.verification.lhs.closed, q)
            row = {"q": q, "left_count": left, "right_count": right, "predicted": _frac(expected * q ** d)}
            row["matches"] = all(c is None or Fraction(c, q ** d) == expected for c in (left, right))
            passed = passed and row["matches"]
            oracle.append(row)
            lines.append(f"q={q}: #left={left} #right={right} predicted {expected * q ** d}")
        payload["oracle"] = oracle
        payload["passed"] = passed
    if rep.common_class is not None:
        lines.append(f"common class: {rep.common_class}")
    lines.append("PASSED" if passed else "FAILED")
    return (EXIT_OK if passed else EXIT_FAILED), payload, lines


def _tate_prediction(variety, q):
    try:
        return realize_count(variety.cls, q)
    except MotintError:
        return None


def cmd_count(args):
    ex = _load(args, "scheme")
    n = count_points(ex.scheme, args.q, _budget(args))
    predicted = _tate_prediction(ex.variety, args.q)
    ok = predicted is None or predicted == n
    payload = {"example": ex.id, "q": args.q, "count": n,
               "predicted": None if predicted is None else _frac(predicted), "matches": ok}
    lines = [f"#{ex.variety.name}(F_{args.q}) = {n}"]
    if predicted is not None:
        lines.append(f"class {ex.variety.cls} at L = {args.q}: {predicted} ({'match' if ok else 'MISMATCH'})")
    return (EXIT_OK if ok else EXIT_FAILED), payload, lines


def cmd_count_jets(args):
    ex = _load(args, "scheme")
    rep = jet_law_report(ex.scheme, args.q, args.m, ex.variety.dim, _budget(args))
    payload = {"example": ex.id, "q": args.q, "m": args.m, "count": rep.count, "points": rep.points,
               "smooth_law_prediction": rep.predicted, "smooth_law_holds": rep.holds,
               "smooth": ex.variety.smooth}
    lines = [
        f"#J_{args.m}({ex.variety.name})(F_{args.q}) = {rep.count}",
        f"smooth-law prediction q^(md) #X(F_q) = {rep.predicted}: {'holds' if rep.holds else 'does not hold'}",
    ]
    failed = ex.variety.smooth and not rep.holds
    return (EXIT_FAILED if failed else EXIT_OK), payload, lines


def cmd_contact_count(args):
    ex = _load(args, "snc")
    if ex.oracle_vars is None:
        raise UsageError(f"example {ex.id!r} has no polynomial divisor for the oracle")
    if (args.contact is None) == (args.order is None):
        raise UsageError("give exactly one of --contact or --order")
    n = ex.oracle_vars
    budget = _budget(args)
    d = ex.snc.dim
    if args.contact is not None:
        try:
            vec = tuple(int(p) for p in args.contact.split(","))
        except ValueError:
            raise UsageError(f"--contact must be comma-separated integers, got {args.contact!r}") from None
        count = count_contact_locus(n, ex.oracle_divisor, args.q, args.m, contact=vec, budget=budget)
        measure = contact_measure(ContactDatum.from_vector(ex.snc, vec)) if any(vec) else \
            ex.snc.stratum(()).shift(-d)
        spec = {"contact": list(vec)}
    else:
        count = count_contact_locus(n, ex.oracle_divisor, args.q, args.m, order=args.order, budget=budget)
        measure = level_measure(ex.snc, args.order)
        spec = {"order": args.order}
    predicted = realize_count(measure, args.q) * args.q ** ((args.m + 1) * d)
    ok = predicted == count
    payload = {"example": ex.id, "q": args.q, "m": args.m, **spec, "count": count,
               "measure": class_to_json(measure), "predicted": _frac(predicted), "matches": ok}
    lines = [f"jets counted: {count}", f"measure {measure} predicts {predicted}: {'match' if ok else 'MISMATCH'}"]
    return (EXIT_OK if ok else EXIT_FAILED), payload, lines


def cmd_fibration_check(args):
    rep = fibration_fiber_counts(args.q, args.m, args.e, _budget(args))
    lines = [f"fiber sizes over f_m(C'_e), e={args.e}, m={args.m}, q={args.q}: "
             + ", ".join(f"{n} fibers of size {s}" for s, n in rep.fiber_sizes.items()),
             f"union of fibers: {rep.union_of_fibers}",
             "PASSED" if rep.passed else "FAILED"]
    return (EXIT_OK if rep.passed else EXIT_FAILED), rep.to_json(), lines


def cmd_zeta(args):
    ex = _load(args, "scheme", "kequiv")
    if ex.kind == "scheme":
        z = zeta_closed_form(ex.variety.cls, args.q)
        return EXIT_OK, {"example": ex.id, "zeta": z.to_json()}, [f"Z({ex.variety.name}, t) = {z}"]
    zl = zeta_closed_form(ex.pair.left.cls, args.q)
    zr = zeta_closed_form(ex.pair.right.cls, args.q)
    same = zl == zr
    payload = {"example": ex.id, "left": zl.to_json(), "right": zr.to_json(), "identical": same}
    lines = [f"Z({ex.pair.left.name}, t) = {zl}", f"Z({ex.pair.right.name}, t) = {zr}",
             "identical" if same else "DIFFERENT"]
    return (EXIT_OK if same else EXIT_FAILED), payload, lines


def cmd_examples(args):
    if args.show:
        text = corpus.example_text(args.show)
        return EXIT_OK, {"example": json.loads(text)}, [text.rstrip("\n")]
    rows = []
    for ident in corpus.example_ids():
        ex = corpus.load_example(ident)
        rows.append({"id": ident, "kind": ex.kind, "description": ex.description})
    lines = [f"{r['id']:<26} {r['kind']:<10} {r['description']}" for r in rows]
    return EXIT_OK, {"examples": rows}, lines


COMMANDS = {
    "integrate": (cmd_integrate, "integrate L^-ord_D over an SNC model"),
    "transform-check": (cmd_transform_check, "verify the transformation rule for a blow-up"),
    "kequiv-check": (cmd_kequiv_check, "compare the integrals of a K-equivalence pair"),
    "count": (cmd_count, "brute-force F_q point count of an affine scheme"),
    "count-jets": (cmd_count_jets, "brute-force F_q count of m-jets"),
    "contact-count": (cmd_contact_count, "count jets by contact order and compare with the measure"),
    "fibration-check": (cmd_fibration_check, "fiber sizes of J_m(Bl_0 A^2) -> J_m(A^2)"),
    "zeta": (cmd_zeta, "zeta function of a polynomial-count class"),
    "examples": (cmd_examples, "list or show the bundled examples"),
}


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--output", choices=("human", "json"), default="human")
        if name == "examples":
            p.add_argument("--show", metavar="ID")
            continue
        if name != "fibration-check":
            p.add_argument("--example", metavar="ID")
            p.add_argument("--input", metavar="PATH")
        p.add_argument("--precision", type=_positive, default=DEFAULT_PRECISION)
        p.add_argument("--max-states", type=_positive, default=EnumerationBudget().max_states)
        p.add_argument("--threads", type=_positive, default=None,
                       help="worker threads (default: $MOTINT_THREADS or the CPU count)")
        if name in ("count", "count-jets", "contact-count", "fibration-check", "zeta"):
            p.add_argument("--q", type=int, required=True)
        if name == "kequiv-check":
            p.add_argument("--q", type=int, action="append",
                           help="also count both sides over F_q from their charts (repeatable)")
        if name in ("count-jets", "contact-count", "fibration-check"):
            p.add_argument("--m", type=_nonneg, required=True)
        if name == "contact-count":
            p.add_argument("--contact", metavar="M1,M2,...")
            p.add_argument("--order", type=_nonneg)
        if name == "fibration-check":
            p.add_argument("--e", type=_nonneg, required=True)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    handler = COMMANDS[args.command][0]
    try:
        code, payload, lines = handler(args)
    except (MotintError, ValueError) as exc:
        if args.output == "json":
            doc = {"schema": corpus.SCHEMA, "command": args.command, "exit_code": EXIT_INPUT, "error": str(exc)}
            if isinstance(exc, InputError):
                doc["path"] = exc.path
            sys.stdout.write(corpus.canonical_dumps(doc))
        print(f"motint {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output == "json":
        doc = {"schema": corpus.SCHEMA, "command": args.command, "exit_code": code, **payload}
        sys.stdout.write(corpus.canonical_dumps(doc))
    else:
        print("\n".join(lines))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
