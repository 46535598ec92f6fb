"""Command-line front end.

Every command reads one JSON document and writes one JSON report. Exit
status: 0 on success (or when the verified property holds), 1 on invalid
input, 2 when a verification or fit comes back negative.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import io
from .errors import InputError, PosrepError
from .mechanism import run, verify_pivot_bound
from .representation import Mode, check_type_conditions, classify, is_parallel, normalize_min_zero
from .roberts_fit import MAX_VARIABLES, fit_affine_maximizer, predict
from .verification import (
    DEFAULT_BUDGET,
    enumerate_ic_onto_no_transfer,
    is_dictatorial,
    pivot_bound_everywhere,
    verify_ic,
    verify_onto,
)

EXIT_OK, EXIT_INPUT, EXIT_FALSE = 0, 1, 2


def cmd_classify(doc, args) -> tuple[dict, int]:
    alts = io.parse_alternatives(doc)
    u = io.parse_utility(io.field(doc, "utility", dict), alts)
    cls = classify(u)
    report = io.new_report("classify", doc)
    report["classification"] = {
        "kind": cls.kind.value,
        "valuation": None if cls.valuation is None else io.valuation_json(cls.valuation),
        "min_zero_valuation": None if cls.valuation is None else io.valuation_json(normalize_min_zero(cls.valuation)),
        "threshold_level": None if cls.threshold_level is None else io.r(cls.threshold_level),
    }
    par = is_parallel(u)
    report["parallel"] = {
        "is_parallel": par.is_parallel,
        "wtp": {a: io.r(x) for a, x in par.wtp.items()},
        "witness": None if par.witness is None else io.witness_json(vars(par.witness)),
    }
    if "grid" in doc:
        grid = [io.rational(g) for g in io.field(doc, "grid", list)]
        anchor = doc.get("anchor")
        if anchor is not None:
            anchor = (io.field(anchor, "alternative", str, "anchor"), io.rational(io.field(anchor, "payment", where="anchor")))
        modes = [Mode.FULL, Mode.POSITIVE] if args.mode is None else [Mode.FULL if args.mode == "full" else Mode.POSITIVE]
        checks = {}
        for m in modes:
            rep = check_type_conditions(u, grid, m, anchor)
            checks[m.value] = {
                "passed": rep.passed,
                "anchor": io.witness_json(rep.anchor),
                "conditions": [
                    {"name": c.name, "passed": c.passed, "violations": c.violations,
                     "witness": io.witness_json(c.witness), "note": c.note}
                    for c in rep.conditions
                ],
            }
        report["conditions"] = checks
    return report, EXIT_OK


def _names(sc):
    return [a.name for a in sc.agents]


def cmd_run(doc, args) -> tuple[dict, int]:
    sc = io.parse_scenario(doc, args.mode)
    types = sc.true_types()
    out = run(sc.spec, types)
    bound = verify_pivot_bound(sc.spec, types)
    report = io.new_report("run", doc)
    report["outcome"] = io.outcome_json(out, _names(sc))
    report["pivot_bound"] = dict(zip(_names(sc), bound))
    return report, EXIT_OK


def cmd_verify_ic(doc, args) -> tuple[dict, int]:
    sc = io.parse_scenario(doc, args.mode)
    rep = verify_ic(sc, budget=args.budget)
    names = _names(sc)
    bound_ok, failing = pivot_bound_everywhere(sc)
    report = io.new_report("verify ic", doc)
    report["ic"] = {
        "holds": rep.holds,
        "evaluations": rep.evaluations,
        "violation_count": len(rep.violations),
        "violations": [
            {
                "agent": names[v.agent],
                "true_type": v.true_type,
                "misreport": v.misreport,
                "profile": list(v.profile),
                "truthful": io.outcome_json(v.truthful, names),
                "deviating": io.outcome_json(v.deviating, names),
            }
            for v in rep.violations
        ],
    }
    report["pivot_bound"] = {"holds_everywhere": bound_ok, "first_failure": None if failing is None else list(failing)}
    return report, EXIT_OK if rep.holds else EXIT_FALSE


def cmd_verify_onto(doc, args) -> tuple[dict, int]:
    sc = io.parse_scenario(doc, args.mode)
    rep = verify_onto(sc, budget=args.budget)
    report = io.new_report("verify onto", doc)
    report["onto"] = {
        "onto": rep.onto,
        "witnesses": {a: None if p is None else list(p) for a, p in rep.witnesses.items()},
    }
    return report, EXIT_OK if rep.onto else EXIT_FALSE


def cmd_fit(doc, args) -> tuple[dict, int]:
    table = io.parse_table(doc)
    max_vars = doc.get("max_variables", MAX_VARIABLES)
    if isinstance(max_vars, bool) or not isinstance(max_vars, int):
        raise InputError("max_variables must be an integer")
    fit = fit_affine_maximizer(table, max_vars)
    names = doc.get("agents") or [f"agent{i + 1}" for i in range(table.n_agents)]
    if len(names) != table.n_agents:
        raise InputError("agents must list one name per profile entry")
    report = io.new_report("fit", doc)
    report["fit"] = io.fit_json(fit, names, table.alternatives)
    if fit is not None and "holdout" in doc:
        holdout = io.parse_table(doc, key="holdout")
        report["fit"]["holdout_agreement"] = io.r(predict(fit, holdout))
    return report, EXIT_OK if fit is not None else EXIT_FALSE


def cmd_enumerate(doc, args) -> tuple[dict, int]:
    alts, domains, caps = io.parse_enumeration(doc)
    tables = enumerate_ic_onto_no_transfer(alts, domains, **caps)
    report = io.new_report("enumerate", doc)
    report["count"] = len(tables)
    report["tables"] = [
        {
            "rows": [{"profile": list(p), "chosen": x} for p, x in t.items()],
            "dictators": sorted(is_dictatorial(t, domains)),
        }
        for t in tables
    ]
    return report, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posrep", description="Quasi-linear representation, affine VCG runs and exhaustive checks."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", default="-", help="input JSON file, or - for standard input")
    common.add_argument("-o", "--output", default="-", help="report file, or - for standard output")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cap on outcome evaluations")
    common.add_argument("--mode", choices=["pos", "full"], default=None, help="override the representation mode")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="classify one utility").set_defaults(handler=cmd_classify)
    sub.add_parser("run", parents=[common], help="run the mechanism on the true types").set_defaults(handler=cmd_run)
    verify = sub.add_parser("verify", help="exhaustive checks over a scenario")
    vsub = verify.add_subparsers(dest="check", required=True)
    vsub.add_parser("ic", parents=[common], help="incentive compatibility").set_defaults(handler=cmd_verify_ic)
    vsub.add_parser("onto", parents=[common], help="every alternative reachable").set_defaults(handler=cmd_verify_onto)
    sub.add_parser("fit", parents=[common], help="recover an affine maximizer").set_defaults(handler=cmd_fit)
    sub.add_parser("enumerate", parents=[common], help="all onto no-transfer IC rules").set_defaults(handler=cmd_enumerate)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.budget < 1:
            raise InputError("--budget must be a positive integer")
        try:
            text = _read(args.input)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
        report, status = args.handler(io.loads(text), args)
    except PosrepError as exc:
        error = {"code": exc.code, "message": exc.message}
        error.update(io.witness_json(exc.details))
        _write(args.output, io.dumps_report({"schema_version": io.SCHEMA_VERSION, "error": error}))
        return EXIT_INPUT
    _write(args.output, io.dumps_report(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
