"""Command line front end.

Exit codes: 0 clean run, 2 malformed input or case, 3 a case hit the
degree cap.
"""
from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from . import geometry
from .casefile import CaseFileError, build_cases, load_schema, parse_casefile
from .frobenius import (FrobeniusConfig, frobenius_closure_test, hasse_invariant,
                        hasse_vanishes_by_membership, tight_closure_witness)
from .poly import Poly, is_prime
from .ring import DegreeCapError, GradedRing
from .syzygy import minimal_generator_degrees, relation_dim
from .verdict import batch

EXIT_OK, EXIT_MALFORMED, EXIT_CAP = 0, 2, 3


def _dump(report: dict, out: str | None) -> None:
    jsonschema.validate(report, load_schema("report.schema.json"))
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_code(entries) -> int:
    kinds = {e["error"]["kind"] for e in entries if "error" in e}
    if "malformed" in kinds:
        return EXIT_MALFORMED
    if "resource_cap" in kinds:
        return EXIT_CAP
    return EXIT_OK


def _load(path: str) -> dict:
    with open(path) as fh:
        return parse_casefile(fh.read(), path)


def _overrides(args) -> dict:
    return {"e_max": args.emax, "budget": args.budget, "seed": args.seed, "degree_cap": args.degree_cap}


def _input(case) -> dict:
    d = case.data
    ring = d.ring
    return {"p": ring.p, "relation": ring.fmt(ring.relation) if ring.relation else None,
            "generators": [ring.fmt(g) for g in d.generators], "candidate": ring.fmt(d.candidate),
            "twist": d.twist, "seed": case.options["seed"]}


def cmd_verdict(args) -> int:
    doc = _load(args.cases)
    report = batch(doc, _overrides(args), audit=args.audit)
    report["command"] = "verdict"
    _dump(report, args.out)
    return _exit_code(report["cases"])


def cmd_invariants(args) -> int:
    doc = _load(args.cases)
    entries = []
    for case in build_cases(doc, _overrides(args)):
        entry = {"name": case.name}
        if case.error:
            entry["error"] = {"kind": "malformed", "message": case.error}
        else:
            entry["input"] = _input(case)
            try:
                entry["report"] = geometry.build_report(case.data, args.degh).as_dict()
            except DegreeCapError as exc:
                entry["error"] = {"kind": "resource_cap", "message": str(exc)}
            except ValueError as exc:
                entry["error"] = {"kind": "malformed", "message": str(exc)}
        entries.append(entry)
    _dump({"command": "invariants", "cases": entries}, args.out)
    return _exit_code(entries)


def cmd_hasse(args) -> int:
    try:
        primes = [int(t) for t in args.primes.split(",") if t.strip()]
    except ValueError:
        print("primes must be a comma separated list of integers", file=sys.stderr)
        return EXIT_MALFORMED
    table = []
    for p in primes:
        if not is_prime(p):
            print(f"p = {p}: characteristic must be prime", file=sys.stderr)
            return EXIT_MALFORMED
        try:
            F = Poly.parse(args.relation, p)
            h = hasse_invariant(F)
        except ValueError as exc:
            print(f"p = {p}: {exc}", file=sys.stderr)
            return EXIT_MALFORMED
        table.append({"p": p, "hasse": h, "supersingular": h == 0,
                      "membership_check": hasse_vanishes_by_membership(F)})
    _dump({"command": "hasse", "relation": args.relation, "table": table}, args.out)
    return EXIT_OK


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi or lo)


def cmd_syzygy(args) -> int:
    k_lo, k_hi = _parse_range(args.k_range)
    jobs = []
    if args.cases:
        for case in build_cases(_load(args.cases)):
            if case.error:
                jobs.append((case.name, None, case.raw.get("generators", []), case.error))
            else:
                jobs.append((case.name, case.data.ring, list(case.data.generators), None))
    else:
        if args.p is None or not args.generators:
            print("give --cases or both --p and --generators", file=sys.stderr)
            return EXIT_MALFORMED
        if not is_prime(args.p):
            print("characteristic must be prime", file=sys.stderr)
            return EXIT_MALFORMED
        try:
            variables = tuple(v.strip() for v in args.variables.split(","))
            ring = GradedRing.parse(args.p, args.relation or None, variables)
            gens = [ring.poly(g) for g in args.generators.split(",")]
        except ValueError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_MALFORMED
        jobs.append(("inline", ring, gens, None))
    entries = []
    for name, ring, gens, err in jobs:
        if err:
            entries.append({"name": name, "generators": list(gens), "error": {"kind": "malformed", "message": err}})
            continue
        entry = {"name": name, "generators": [ring.fmt(g) for g in gens]}
        try:
            entry["dimensions"] = [{"k": k, "dim": relation_dim(ring, gens, k)} for k in range(k_lo, k_hi + 1)]
            top = max(k_hi, max(g.degree for g in gens))
            gd = minimal_generator_degrees(ring, gens, top)
            entry["generator_degrees"] = [list(kc) for kc in gd.counts]
            entry["window"] = list(gd.window)
            entry["label"] = gd.label if ring.relation is not None else "minimal generators"
        except ValueError as exc:
            entry["error"] = {"kind": "malformed", "message": str(exc)}
        entries.append(entry)
    _dump({"command": "syzygy", "cases": entries}, args.out)
    return _exit_code(entries)


def cmd_frobenius(args) -> int:
    doc = _load(args.cases)
    entries = []
    for case in build_cases(doc, _overrides(args)):
        entry = {"name": case.name}
        if case.error:
            entry["error"] = {"kind": "malformed", "message": case.error}
            entries.append(entry)
            continue
        d = case.data
        ring = d.ring
        entry["input"] = _input(case)
        cfg = FrobeniusConfig(case.options.get("test_element"), case.options["e_max"], case.options["degree_cap"])
        try:
            fc = frobenius_closure_test(d, cfg)
            entry["frobenius_closure"] = {
                "status": fc.status, "witness_q": fc.witness_q, "tested_q": list(fc.tested_q),
                "cofactors": [ring.fmt(a) for a in fc.certificate.cofactors] if fc.certificate else None}
            try:
                w = tight_closure_witness(d, cfg)
                entry["tight_closure"] = {
                    "test_element": ring.fmt(w.test_element), "q": list(w.qs), "results": list(w.results),
                    "summary": w.summary, "assumptions": list(w.assumptions),
                    "certificates": [[ring.fmt(a) for a in c.cofactors] if c else None for c in w.certificates]}
            except DegreeCapError:
                raise
            except ValueError as exc:
                entry["tight_closure"] = None
                entry["note"] = str(exc)
        except DegreeCapError as exc:
            entry["error"] = {"kind": "resource_cap", "message": str(exc)}
        entries.append(entry)
    _dump({"command": "frobenius", "cases": entries}, args.out)
    return _exit_code(entries)


def _common(sp, cases_required=True):
    sp.add_argument("--cases", required=cases_required, help="JSON case file")
    sp.add_argument("--emax", type=int, help="largest Frobenius exponent e (q = p^e)")
    sp.add_argument("--budget", type=int, help="random combinations tried in the relation search")
    sp.add_argument("--seed", type=int, help="seed for the relation search")
    sp.add_argument("--degree-cap", type=int, dest="degree_cap", help="largest graded piece dimension allowed")
    sp.add_argument("--out", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forcing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verdict", help="classify every case of a case file")
    _common(sp)
    sp.add_argument("--audit", action="store_true", help="evaluate and log every rule")
    sp.set_defaults(func=cmd_verdict)

    sp = sub.add_parser("invariants", help="intersection numbers and e-invariant bounds")
    _common(sp)
    sp.add_argument("--degh", type=int, help="deg O_Y(1) when the ring does not determine it")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("hasse", help="Hasse invariants of a plane cubic for several primes")
    sp.add_argument("--relation", required=True, help="cubic in x, y, z")
    sp.add_argument("--primes", required=True, help="comma separated primes")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_hasse)

    sp = sub.add_parser("syzygy", help="relation dimensions and generator degrees")
    _common(sp, cases_required=False)
    sp.add_argument("--p", type=int)
    sp.add_argument("--variables", default="x,y,z")
    sp.add_argument("--relation", default=None)
    sp.add_argument("--generators", help="comma separated generators")
    sp.add_argument("--k-range", dest="k_range", default="1:6", help="lo:hi")
    sp.set_defaults(func=cmd_syzygy)

    sp = sub.add_parser("frobenius", help="Frobenius closure and test-element witnesses")
    _common(sp)
    sp.set_defaults(func=cmd_frobenius)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CaseFileError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
