"""Batch command-line front end.

Every subcommand prints one JSON envelope {"version", "command", "config", "verdict",
"details"} with sorted keys. Exit codes: 0 PASS, 1 FAIL, 2 ERROR (including usage errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from . import __version__
from .errors import LevelLabError

EXIT = {"PASS": 0, "FAIL": 1, "ERROR": 2}


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    if hasattr(obj, "numerator") and hasattr(obj, "denominator") and not isinstance(obj, int):
        return str(obj)
    return obj


# ---------------------------------------------------------------------------
# subcommands; each returns (verdict, details)


def cmd_invariants(args):
    from .curve import parse_curve

    E = parse_curve(args.curve, args.field)
    details = {
        "curve": E.coefficients_text(),
        "field": args.field,
        "j": _field_value(E.j),
        "discriminant": _field_value(E.discriminant),
        "c4": _field_value(E.b("c4")),
        "c6": _field_value(E.b("c6")),
    }
    if args.compare:
        E2 = parse_curve(args.compare, args.field)
        details["compare"] = {"curve": E2.coefficients_text(), "j": _field_value(E2.j)}
        details["j_equal"] = E.j == E2.j
        if not details["j_equal"]:
            details["first_witness"] = {"j1": details["j"], "j2": details["compare"]["j"]}
            return "FAIL", details
    return "PASS", details


def _field_value(x):
    return x.text() if hasattr(x, "text") else str(x)


def cmd_ap(args):
    from .curve import parse_curve
    from .congruence import bad_primes
    from .exactfield import is_prime

    E = parse_curve(args.curve, "Q")
    bad = bad_primes(E)
    rows = []
    for p in range(2, args.pmax + 1):
        if not is_prime(p):
            continue
        if p in bad:
            rows.append({"p": p, "a_p": None, "reduction": "bad"})
        else:
            rows.append({"p": p, "a_p": E.reduce(p).trace(), "reduction": "good"})
    return "PASS", {"curve": E.coefficients_text(), "p_max": args.pmax, "primes": rows}


def _two_curves(args):
    from .curve import parse_curve

    positional = list(args.curves)
    e1 = args.e1 or (positional.pop(0) if positional else None)
    e2 = args.e2 or (positional.pop(0) if positional else None)
    if not e1 or not e2 or positional:
        raise argparse.ArgumentTypeError("exactly two curves are needed (positional or --e1/--e2)")
    return parse_curve(e1, "Q"), parse_curve(e2, "Q")


def cmd_congruence(args):
    from .congruence import ap_congruence

    E1, E2 = _two_curves(args)
    rep = ap_congruence(E1, E2, args.N, args.pmax)
    details = rep.to_json()
    details["scope"] = "local evidence: finitely many primes"
    if rep.disagreements:
        p = rep.disagreements[0]
        row = next(r for r in rep.rows if r[0] == p)
        details["first_witness"] = {"p": p, "a_p_1": row[1], "a_p_2": row[2], "N": args.N}
        return "FAIL", details
    return "PASS", details


def cmd_detclasses(args):
    from .congruence import determinant_classes, smallest_admissible_prime

    E1, E2 = _two_curves(args)
    p = args.p if args.p else smallest_admissible_prime(E1, E2, args.N, args.k_cap)
    rep = determinant_classes(E1, E2, args.N, p, args.k_cap)
    details = rep.to_json()
    closed = all(a * c % args.N in rep.alphas for a in rep.alphas for c in rep.centralizer_dets)
    details["closed_under_centralizer"] = closed
    if not rep.alphas or not closed:
        details["first_witness"] = {"p": p, "D1": rep.D1, "D2": rep.D2, "alphas": rep.alphas}
        return "FAIL", details
    return "PASS", details


def cmd_moduli_props(args):
    from .moduli import frobenius_suite, identity_suite

    if args.suite == "identities":
        rep = identity_suite(args.N, args.m, args.q, args.trials, args.seed, args.pool_size)
    else:
        rep = frobenius_suite(args.N, args.q, args.trials, args.seed)
    details = rep.to_json()
    return ("PASS" if rep.passed else "FAIL"), details


def cmd_fibres(args):
    from .moduli import det_fibre_census

    counts = det_fibre_census(args.N, args.q, args.m)
    empty = [u for u, c in sorted(counts.items()) if c == 0]
    details = {
        "N": args.N,
        "q": args.q,
        "m": args.m,
        "fibres": {str(u): c for u, c in sorted(counts.items())},
        "points": sum(counts.values()),
        "det_surjective": not empty,
    }
    if empty:
        details["first_witness"] = {"empty_fibre": empty[0]}
        return "FAIL", details
    return "PASS", details


def _load_form(args):
    from .polyalg import parse_form

    if args.name:
        return parse_form(args.name, "Q")
    if args.form:
        return parse_form(args.form, "Q", _str_list(args.vars) if args.vars else None)
    raise argparse.ArgumentTypeError("give --name or --form")


def cmd_quartic_check(args):
    from .polyalg import irrelevant_by_leading_terms, jacobian_ideal, projective_smooth

    F = _load_form(args)
    fields = (["Q"] if args.over_q else []) + [f"Fp:{p}" for p in args.primes]
    rows = []
    first = None
    for fld in fields:
        Ff = F.change_field(fld)
        smooth = projective_smooth(Ff)
        dual = irrelevant_by_leading_terms(jacobian_ideal(Ff))
        row = {"field": fld, "smooth": smooth, "leading_term_route": dual}
        if args.expect_singular is not None and fld != "Q":
            row["expected_smooth"] = int(fld[3:]) not in args.expect_singular
        rows.append(row)
        if first is None:
            if smooth != dual:
                first = {"field": fld, "rabinowitsch": smooth, "leading_terms": dual}
            elif "expected_smooth" in row and row["expected_smooth"] != smooth:
                first = {"field": fld, "expected_smooth": row["expected_smooth"], "smooth": smooth}
    details = {
        "form": F.to_text(),
        "vars": list(F.vars),
        "results": rows,
        "smooth_at": [r["field"] for r in rows if r["smooth"]],
        "singular_at": [r["field"] for r in rows if not r["smooth"]],
    }
    if first:
        details["first_witness"] = first
        return "FAIL", details
    return "PASS", details


def cmd_radical_check(args):
    from .polyalg import IdealData, SparsePoly, radical_containment_report

    with open(args.ideal) as fh:
        data = json.load(fh)
    I = IdealData.from_json(data, args.field)
    targets = _str_list(args.targets) if args.targets else list(I.vars)
    polys = [SparsePoly.from_text(t, I.vars, I.field) for t in targets]
    rep = radical_containment_report(I, polys)
    failing = [t for t, ok in rep["targets"].items() if not ok]
    if failing:
        rep["first_witness"] = {"target": failing[0], "ideal": I.to_json()}
        return "FAIL", rep
    return "PASS", rep


def cmd_charp(args):
    from . import charp

    sub = args.charp_command
    if sub == "endos":
        d = charp.endo_checks(args.N, args.q)
        return ("PASS" if d.pop("passed") else "FAIL"), d
    if sub == "pairing-eq":
        b1, b2 = charp.pairing_tables(args.N, args.q)
        diff = sorted(k for k in b1 if b1[k] != b2[k])
        F = charp.smallest_field_with_roots(args.N) if args.q is None else None
        d = {"N": args.N, "q": args.q if args.q else F.q, "pairs": len(b1), "equal": not diff}
        if diff:
            k = diff[0]
            d["first_witness"] = {"u_code": k[0], "v_index": k[1], "b1": b1[k], "b2": b2[k]}
            return "FAIL", d
        return "PASS", d
    if sub == "quaternion":
        h = charp.alternative_modulus(args.p, args.r) if args.alt_modulus else None
        rep = charp.quaternion_quotient_count(args.p, args.r, h, args.cap)
        d = rep.to_json()
        d["dieudonne_crosscheck"] = charp.dieudonne_crosscheck(args.p, args.r)
        ok = (
            rep.kernel_is_subgroup
            and rep.kernel_is_normal
            and rep.kernel == args.p**2
            and d["dieudonne_crosscheck"]["failures"] == 0
        )
        if not ok:
            d["first_witness"] = {"kernel": rep.kernel, "expected_kernel": args.p**2}
        return ("PASS" if ok else "FAIL"), d
    if sub == "ss-count":
        js = charp.supersingular_j_enumeration(args.p, args.cap)
        stable = charp.frobenius_stable(js)
        d = {"p": args.p, "supersingular_j": [j.text() for j in js], "count": len(js), "frobenius_stable": stable}
        if not js or not stable:
            d["first_witness"] = {"list": d["supersingular_j"]}
            return "FAIL", d
        return "PASS", d
    if sub == "census":
        return "PASS", charp.ss_component_census(args.p, args.r, args.structure_size)
    raise argparse.ArgumentTypeError(f"unknown charp command {sub!r}")


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="level-lab", description="Exact level-structure toolkit for elliptic curves.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func: Callable, help: str):
        p = sub.add_parser(name, help=help)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("invariants", cmd_invariants, "curve invariants (optionally compare j with a second curve)")
    p.add_argument("curve", help="registry name, 'a1,a2,a3,a4,a6' or 'A,B'")
    p.add_argument("--field", default="Q", help="Q, Fp:p or Fq:p^k")
    p.add_argument("--compare", help="second curve; FAIL if the j-invariants differ")

    p = add("ap", cmd_ap, "a_p by exact counting at primes up to --pmax")
    p.add_argument("curve")
    p.add_argument("--pmax", type=int, default=100)

    for name, func, help in (
        ("congruence", cmd_congruence, "a_p mod N agreement at good primes"),
        ("detclasses", cmd_detclasses, "Frobenius-equivariant isomorphisms E1[N] -> E2[N] and their alphas"),
    ):
        p = add(name, func, help)
        p.add_argument("curves", nargs="*", help="two curves (alternatively --e1/--e2)")
        p.add_argument("--e1")
        p.add_argument("--e2")
        p.add_argument("-N", type=int, required=True)
        if name == "congruence":
            p.add_argument("--pmax", type=int, default=200)
        else:
            p.add_argument("-p", type=int, help="good prime >= 5 (default: smallest admissible)")
            p.add_argument("--k-cap", type=int, default=24)

    p = add("moduli-props", cmd_moduli_props, "seeded property suite on moduli points")
    p.add_argument("-N", type=int, required=True)
    p.add_argument("-m", type=int, default=1)
    p.add_argument("-q", type=int, required=True, help="prime field size (the prime p for --suite frobenius)")
    p.add_argument("--trials", type=int, default=200, help="trials (curves for --suite frobenius)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--suite", choices=["identities", "frobenius"], default="identities")
    p.add_argument("--pool-size", type=int, default=4)

    p = add("fibres", cmd_fibres, "det_index fibre census over all level structures over F_q")
    p.add_argument("-N", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument("-m", type=int, default=1)

    p = add("quartic-check", cmd_quartic_check, "projective smoothness of a plane form over Q and F_p")
    p.add_argument("--name", help="registry form name")
    p.add_argument("--form", help="polynomial text")
    p.add_argument("--vars", help="comma-separated variable order for --form")
    p.add_argument("--primes", type=_int_list, default=[])
    p.add_argument("--over-q", action="store_true", help="also decide smoothness over Q")
    p.add_argument("--expect-singular", type=_int_list, help="assert singular exactly at these primes")

    p = add("radical-check", cmd_radical_check, "radical membership of targets in an ideal from JSON")
    p.add_argument("--ideal", required=True, help='JSON file {"vars": [...], "gens": [...], "field": ...}')
    p.add_argument("--targets", help="comma-separated polynomials (default: every variable)")
    p.add_argument("--field", default="Q")

    p = add("charp", cmd_charp, "characteristic-p structures")
    csub = p.add_subparsers(dest="charp_command", required=True, parser_class=_Parser)
    c = csub.add_parser("endos", help="End(mu_N x Z/N): det multiplicativity and unit criterion")
    c.add_argument("-N", type=int, required=True)
    c.add_argument("-q", type=int)
    c = csub.add_parser("pairing-eq", help="b1 = b2 on mu_N x Hom(mu_N, Z/N)")
    c.add_argument("-N", type=int, required=True)
    c.add_argument("-q", type=int)
    c = csub.add_parser("quaternion", help="unit quotient of O/p^r by 1 + p^(r-1) Pi O")
    c.add_argument("-p", type=int, required=True)
    c.add_argument("-r", type=int, required=True)
    c.add_argument("--alt-modulus", action="store_true", help="use an alternative Galois-ring modulus")
    c.add_argument("--cap", type=int, default=10**7)
    c = csub.add_parser("ss-count", help="supersingular j-invariants in F_{p^2}")
    c.add_argument("-p", type=int, required=True)
    c.add_argument("--cap", type=int, default=200)
    c = csub.add_parser("census", help="component-count bound from j-list, structure size and quotient")
    c.add_argument("-p", type=int, required=True)
    c.add_argument("-r", type=int, required=True)
    c.add_argument("--structure-size", type=int, required=True)
    for c in csub.choices.values():
        c.add_argument("--out")
    return ap


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}


def render(envelope: dict) -> str:
    return json.dumps(_jsonable(envelope), sort_keys=True, indent=2) + "\n"


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    command = args.command if args.command != "charp" else f"charp {args.charp_command}"
    try:
        verdict, details = args.func(args)
    except (LevelLabError, argparse.ArgumentTypeError, OSError, json.JSONDecodeError) as exc:
        verdict, details = "ERROR", {"error": type(exc).__name__, "message": str(exc)}
    envelope = {
        "version": __version__,
        "command": command,
        "config": _config(args),
        "verdict": verdict,
        "details": details,
    }
    text = render(envelope)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT[verdict]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
