"""Command-line front end.

Subcommands: classify, group-status, twisted-eq, orbits, verify,
oracle-classes.  Automorphisms are given as JSON spec files (schema
version 1); small matrices can be passed inline as "a,b;c,d".  All
commands accept --json for machine-readable output.

Exit codes: 0 success, 1 verification mismatch, 2 input error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from .finite_oracle import (
    DEFAULT_ELEMENT_BUDGET,
    BudgetExceededError,
    induce_automorphism,
    oracle_report,
    twisted_classes_bruteforce,
)
from .lattice import (
    IntMatrix,
    OrbitReport,
    realized_periods,
    smith_normal_form,
)
from .reidemeister import (
    DEFAULT_SEARCH_BUDGET,
    are_twisted_conjugate_full,
    r_infinity_status,
    reidemeister_number,
    unit_order,
)
from .wreath import (
    WreathAutomorphism,
    element_to_json,
    format_element,
    parse_element,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

MAX_CLI_RANK = 16  # soft limit; the library itself has no cap

SPEC_VERSION = 1


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# spec files


def spec_to_json(phi: WreathAutomorphism) -> dict:
    out = {
        "version": SPEC_VERSION,
        "m": phi.m,
        "k": phi.k,
        "matrix": phi.matrix.to_lists(),
        "u": phi.u,
        "x0": list(phi.x0),
    }
    if phi.inner is not None:
        out["inner"] = format_element(phi.inner)
    return out


def spec_from_json(obj: dict) -> WreathAutomorphism:
    if not isinstance(obj, dict):
        raise InputError("spec must be a JSON object")
    if obj.get("version") != SPEC_VERSION:
        raise InputError(f"unsupported spec version: {obj.get('version')!r}")
    try:
        m = int(obj["m"])
        k = int(obj["k"])
        matrix = obj["matrix"]
        u = int(obj["u"])
        x0 = obj.get("x0", [0] * k)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad spec field: {exc}") from exc
    if k < 1 or k > MAX_CLI_RANK:
        raise InputError(f"rank k must be in 1..{MAX_CLI_RANK}")
    if len(matrix) != k or any(len(row) != k for row in matrix):
        raise InputError("matrix must be a k x k array of integers")
    try:
        a = IntMatrix(matrix)
        inner = None
        if obj.get("inner"):
            inner = parse_element(obj["inner"], m)
        return WreathAutomorphism(a, m, u, tuple(int(c) for c in x0), inner)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_spec(args: argparse.Namespace) -> WreathAutomorphism:
    if getattr(args, "spec", None):
        try:
            with open(args.spec) as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read spec file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"spec file is not valid JSON: {exc}") from exc
        return spec_from_json(obj)
    if args.matrix is None or args.m is None:
        raise InputError("give a spec file, or --m/--u/--matrix inline")
    rows = [r for r in args.matrix.split(";") if r.strip()]
    matrix = [[int(x) for x in row.split(",")] for row in rows]
    k = len(matrix)
    x0 = [int(x) for x in args.x0.split(",")] if args.x0 else [0] * k
    return spec_from_json(
        {
            "version": SPEC_VERSION,
            "m": args.m,
            "k": k,
            "matrix": matrix,
            "u": args.u,
            "x0": x0,
        }
    )


# ---------------------------------------------------------------------------
# report helpers


def _orbit_report_json(report: OrbitReport) -> dict:
    return {
        "order": report.order,
        "realized": [
            {"period": r, "witness": list(w)} for r, w in report.realized
        ],
        "basis_periods": list(report.basis_periods),
    }


def _print_orbit_report(report: OrbitReport) -> None:
    order = "infinite" if report.order is None else str(report.order)
    print(f"matrix order: {order}")
    print(f"basis periods: {list(report.basis_periods)}")
    for r, w in report.realized:
        print(f"  realized period {r}: witness {tuple(w)}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args: argparse.Namespace) -> int:
    phi = _load_spec(args)
    verdict = reidemeister_number(phi)
    report = realized_periods(phi.matrix)
    d = unit_order(phi.u, phi.m)
    if args.json:
        out = verdict.to_json()
        out["orbit_report"] = _orbit_report_json(report)
        out["unit_order"] = d
        print(json.dumps(out, indent=2))
        return EXIT_OK
    if verdict.finite:
        print(f"verdict: finite, R = {verdict.value}, rule = {verdict.rule}")
    else:
        print(f"verdict: infinite, rule = {verdict.rule}")
    print(f"certificate witness: {verdict.witness}")
    print(f"unit order d = {d}")
    _print_orbit_report(report)
    return EXIT_OK


def cmd_group_status(args: argparse.Namespace) -> int:
    if args.m < 2 or args.k < 1:
        raise InputError("need m >= 2 and k >= 1")
    status = r_infinity_status(args.m, args.k)
    witness_spec = spec_to_json(status.example) if status.example else None
    if args.json:
        print(
            json.dumps(
                {"m": args.m, "k": args.k, "status": status.status, "witness_spec": witness_spec},
                indent=2,
            )
        )
        return EXIT_OK
    print(f"Z_{args.m} wr Z^{args.k}: {status.status}")
    if witness_spec:
        verdict = reidemeister_number(status.example)
        print(f"witness automorphism (R = {verdict.value}):")
        print(json.dumps(witness_spec, indent=2))
    return EXIT_OK


def cmd_twisted_eq(args: argparse.Namespace) -> int:
    phi = _load_spec(args)
    try:
        g = parse_element(args.element1, phi.m)
        h = parse_element(args.element2, phi.m)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if g.k != phi.k or h.k != phi.k:
        raise InputError("element rank does not match the spec")
    answer = are_twisted_conjugate_full(phi, g, h, budget=args.budget)
    if args.json:
        out = {"status": answer.status}
        if answer.witness is not None:
            out["witness"] = element_to_json(answer.witness)
        if answer.reason:
            out["reason"] = answer.reason
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(f"answer: {answer.status}")
    if answer.witness is not None:
        print(f"conjugator: {format_element(answer.witness)}")
    if answer.reason:
        print(f"reason: {answer.reason}")
    return EXIT_OK


def cmd_orbits(args: argparse.Namespace) -> int:
    phi = _load_spec(args)
    report = realized_periods(phi.matrix)
    if args.json:
        print(json.dumps(_orbit_report_json(report), indent=2))
        return EXIT_OK
    _print_orbit_report(report)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    phi = _load_spec(args)
    if args.n < 1:
        raise InputError("quotient parameter n must be >= 1")
    aut = induce_automorphism(phi, args.n)
    group = aut.group
    group.check_budget(args.budget)
    report = oracle_report(group, aut, args.budget)
    verdict = reidemeister_number(phi)
    report["library"] = verdict.to_json()

    match = report["tbft"]
    if verdict.finite:
        # the quotient count reproduces R(phi) exactly when n is a multiple
        # of the exponent of Z^k / (I - A) Z^k
        ident = IntMatrix.identity(phi.k)
        exponent = max(smith_normal_form(ident - phi.matrix).diagonal)
        report["quotient_exponent"] = exponent
        if args.n % exponent == 0:
            match = match and report["twisted_classes"] == verdict.value
    report["match"] = match

    transports = []
    if args.transport_checks:
        rng = random.Random(args.seed)
        for _ in range(args.transport_checks):
            f = tuple(rng.randrange(group.m) for _ in group.positions)
            t = tuple(rng.randrange(group.n) for _ in range(group.k))
            g_fin = (f, t)
            twisted = aut.twist(group.inverse(g_fin))
            count_twisted, _ = twisted_classes_bruteforce(group, twisted, args.budget)
            transports.append(count_twisted == report["twisted_classes"])
        report["transport_counts_equal"] = all(transports)
        match = match and all(transports)
        report["match"] = match

    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"group: Z_{group.m} wr (Z/{group.n})^{group.k}  (order {group.size})")
        print(f"twisted classes: {report['twisted_classes']}")
        print(f"fixed irreps:    {report['fixed_irreps']}")
        print(f"tbft: {report['tbft']}")
        lib = "finite R = " + str(verdict.value) if verdict.finite else "infinite"
        print(f"library verdict: {lib} ({verdict.rule})")
        if transports:
            print(f"transport checks: {sum(transports)}/{len(transports)} equal")
        print(f"match: {match}")
    return EXIT_OK if match else EXIT_MISMATCH


def cmd_oracle_classes(args: argparse.Namespace) -> int:
    phi = _load_spec(args)
    aut = induce_automorphism(phi, args.n)
    group = aut.group
    group.check_budget(args.budget)
    count, reps = twisted_classes_bruteforce(group, aut, args.budget)
    if args.json:
        print(
            json.dumps(
                {
                    "group": {"m": group.m, "n": group.n, "k": group.k},
                    "twisted_classes": count,
                    "representatives": [{"f": list(f), "t": list(t)} for f, t in reps],
                },
                indent=2,
            )
        )
        return EXIT_OK
    print(f"group order {group.size}, twisted classes: {count}")
    for f, t in reps:
        print(f"  f={list(f)} t={list(t)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lamptwist",
        description="Twisted conjugacy for automorphisms of Z_m wr Z^k",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument(
        "--budget",
        type=int,
        default=None,
        help="element/node budget for brute-force work",
    )
    spec_args = argparse.ArgumentParser(add_help=False)
    spec_args.add_argument("spec", nargs="?", help="automorphism spec file (JSON)")
    spec_args.add_argument("--m", type=int, help="modulus (inline spec)")
    spec_args.add_argument("--u", type=int, default=1, help="unit u (inline spec)")
    spec_args.add_argument("--matrix", help='inline matrix "a,b;c,d"')
    spec_args.add_argument("--x0", help='inline offset "a,b"')

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, spec_args],
                       help="Reidemeister verdict with certificate")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("group-status", parents=[common],
                       help="does Z_m wr Z^k have the R-infinity property?")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_group_status)

    p = sub.add_parser("twisted-eq", parents=[common, spec_args],
                       help="decide twisted conjugacy of two elements")
    p.add_argument("element1", help='element, e.g. "f=[(0,0):1] t=(0,0)"')
    p.add_argument("element2")
    p.set_defaults(func=cmd_twisted_eq)

    p = sub.add_parser("orbits", parents=[common, spec_args],
                       help="orbit report of the quotient matrix")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("verify", parents=[common, spec_args],
                       help="cross-check the verdict on a finite quotient")
    p.add_argument("n", type=int, help="lattice quotient parameter")
    p.add_argument("--transport-checks", type=int, default=0,
                   help="also verify class-count invariance under N random inner twists")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle-classes", parents=[common, spec_args],
                       help="brute-force twisted classes of a finite quotient")
    p.add_argument("n", type=int, help="lattice quotient parameter")
    p.set_defaults(func=cmd_oracle_classes)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is None:
        args.budget = (
            DEFAULT_SEARCH_BUDGET if args.command == "twisted-eq" else DEFAULT_ELEMENT_BUDGET
        )
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
