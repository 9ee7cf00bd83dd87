"""Command-line front end.

Exit codes: 0 success, 1 verification failure or a "no"/mismatch answer,
2 usage or parse errors.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import catalog, chains, symmetry
from .exactalg import Verdict, format_group
from .homology import h1, h1_filled
from .manifolds import FilledBlock, to_json, validate
from .moves import equivalent, normalize
from .notation import ParseError, parse_expr, parse_slopes, print_expr

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_SLOPE_LIST = re.compile(r"^-\d[\d/,.\-]*$")


class UsageError(Exception):
    pass


def _expr(text):
    try:
        e = parse_expr(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse expression: {exc}") from None
    problems = validate(e)
    if problems:
        raise UsageError("invalid expression: " + "; ".join(problems))
    return e


def _slopes(text):
    try:
        return parse_slopes(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse slopes: {exc}") from None


def _family(name):
    try:
        return chains.family(name)
    except KeyError:
        raise UsageError(f"unknown family {name!r}") from None


def _filled_tuple(name, text):
    fam = _family(name)
    t = _slopes(text)
    if len(t) > fam.cusp_count:
        raise UsageError(f"{name} has {fam.cusp_count} cusps, got {len(t)} slopes")
    return fam, t


# ----------------------------------------------------------------------------
# subcommands; each returns (exit code, lines, json payload)


def cmd_parse(a):
    e = _expr(a.expr)
    return EXIT_OK, [print_expr(e)], {"expr": print_expr(e), "tree": to_json(e)}


def cmd_normalize(a):
    n = normalize(_expr(a.expr))
    return EXIT_OK, [print_expr(n)], {"normal_form": print_expr(n)}


def cmd_homology(a):
    g = format_group(h1(_expr(a.expr)))
    return EXIT_OK, [g], {"h1": g}


def cmd_equiv(a):
    r = equivalent(_expr(a.left), _expr(a.right), a.word_bound)
    code = EXIT_FAIL if r.verdict == Verdict.NO else EXIT_OK
    payload = {"verdict": str(r.verdict), "reason": r.reason, "invariant": r.invariant}
    print(f"reason: {r.reason}", file=sys.stderr)
    return code, [str(r.verdict)], payload


def cmd_fill(a):
    fam, t = _filled_tuple(a.family, a.slopes)
    if a.homology:
        g = format_group(h1_filled(fam.name, t.padded(fam.cusp_count)))
        return EXIT_OK, [g], {"family": fam.name, "slopes": str(t), "h1": g}
    text = print_expr(FilledBlock(fam.name, t))
    return EXIT_OK, [text], {"family": fam.name, "slopes": str(t), "expr": text}


def cmd_orbit(a):
    fam, t = _filled_tuple(a.family, a.slopes)
    group = symmetry.family_group(fam.name)
    orb = sorted(symmetry.orbit(group, t), key=lambda x: x.sort_key())
    rep = orb[0]
    if a.canonical:
        lines = [str(rep)]
    else:
        lines = [str(x) for x in orb]
    payload = {"family": fam.name, "group_order": group.order,
               "canonical": str(rep), "orbit": [str(x) for x in orb]}
    return EXIT_OK, lines, payload


def cmd_factor_check(a):
    fam, t = _filled_tuple(a.family, a.slopes)
    r = symmetry.factor_check(fam.name, t)
    return EXIT_OK, [str(r)], {"family": fam.name, "factors": r.factors, "reason": r.reason}


def cmd_verify_catalog(a):
    try:
        reports = catalog.verify_catalog(a.table)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load fixtures: {exc}") from None
    if not reports:
        raise UsageError(f"no rows for table {a.table}")
    reports.sort(key=lambda r: r.row.id)
    failed = [r for r in reports if not r.passed]
    lines = [r.summary() for r in reports]
    lines.append(f"{len(reports) - len(failed)}/{len(reports)} rows pass")
    for r in failed:
        print(f"failed row {r.row.id}", file=sys.stderr)
    payload = {
        "rows": [{"id": r.row.id, "table": r.row.table, "family": r.row.family,
                  "slopes": r.row.slopes, "passed": r.passed, "error": r.error,
                  "groups": [None if g is None else format_group(g)
                             for g in (r.expr_h1, r.filled_h1, r.listed_h1)]}
                 for r in reports],
        "passed": len(reports) - len(failed),
        "total": len(reports),
    }
    return (EXIT_FAIL if failed else EXIT_OK), lines, payload


_CLASSIFIERS = {
    "Thm2.4-F1": catalog.classify_two_block,
    "Thm2.4-F3": catalog.classify_self_glue,
    "Thm2.7-F1": catalog.classify_three_block,
    "Thm2.7-F2": catalog.classify_double_annulus,
}


def cmd_enumerate(a):
    if a.family not in catalog.FAMILIES:
        raise UsageError(f"unknown family id {a.family!r}; known: "
                         + ", ".join(sorted(catalog.FAMILIES)))
    if a.bound < 0:
        raise UsageError("--bound must be nonnegative")
    classify = _CLASSIFIERS.get(a.family) if a.classify else None
    if a.classify and classify is None:
        raise UsageError(f"no classifier for {a.family}")
    spec = catalog.FAMILIES[a.family]
    lines, items = [], []
    for k, (params, expr) in enumerate(catalog.enumerate_family(a.family, a.bound)):
        if a.limit is not None and k >= a.limit:
            break
        ptext = ",".join(f"{n}={params[n]}" for n in spec.params)
        item = {"params": params, "expr": print_expr(expr)}
        line = f"{ptext}\t{item['expr']}"
        if classify is not None:
            c = classify(*(params[n] for n in spec.params))
            item["label"] = c.label
            line += f"\tcase {c.label}"
        lines.append(line)
        items.append(item)
    return EXIT_OK, lines, {"family": a.family, "bound": a.bound, "items": items}


def cmd_identities(a):
    lines, items, bad = [], [], 0
    for ident in chains.identities():
        r = chains.check_identity(ident)
        bad += not r.agree
        lg, rg = format_group(r.left_h1), format_group(r.right_h1)
        flag = "ok" if r.agree else "MISMATCH"
        lines.append(f"{ident.left} = {ident.right}: {lg} | {rg} {flag}")
        items.append({"left": ident.left, "right": ident.right, "left_h1": lg,
                      "right_h1": rg, "agree": r.agree, "source": ident.source})
    return (EXIT_FAIL if bad else EXIT_OK), lines, {"identities": items}


# ----------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")

    ap = argparse.ArgumentParser(prog="chainfill", description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        # slope lists such as "-2,-2,0" are positionals, not options
        p._negative_number_matcher = _SLOPE_LIST
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, "parse and reprint an expression").add_argument("expr")
    add("normalize", cmd_normalize, "normal form of an expression").add_argument("expr")
    add("homology", cmd_homology, "first homology of an expression").add_argument("expr")

    p = add("equiv", cmd_equiv, "compare two expressions (yes/no/unknown)")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--word-bound", type=int, default=8)

    p = add("fill", cmd_fill, "Dehn filling of a chain-link complement")
    p.add_argument("family")
    p.add_argument("slopes")
    p.add_argument("--homology", action="store_true", help="print H1 of the filling")

    p = add("orbit", cmd_orbit, "orbit of a filling tuple under the shipped symmetries")
    p.add_argument("family")
    p.add_argument("slopes")
    p.add_argument("--canonical", action="store_true", help="print only the representative")

    p = add("factor-check", cmd_factor_check, "whether a filling factors")
    p.add_argument("family")
    p.add_argument("slopes")

    p = add("verify-catalog", cmd_verify_catalog, "three-way homology check of fixture rows")
    p.add_argument("--table", type=int)

    p = add("enumerate", cmd_enumerate, "list a theorem family over bounded parameters")
    p.add_argument("family")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--limit", type=int)
    p.add_argument("--classify", action="store_true", help="append the case label")

    add("identities", cmd_identities, "H1 check of the registered identities")
    return ap


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, lines, payload = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"chainfill {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write("".join(line + "\n" for line in lines))
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
