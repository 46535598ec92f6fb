"""JSON formats: exact rationals as strings, strict parsing, deterministic reports."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional, Sequence

from .errors import InputError
from .mechanism import MechanismSpec, Outcome, Pivot, PivotKind, RepresentationMode
from .pwl import PiecewiseLinearCurve, as_rational, format_rational
from .roberts_fit import AffineFit, AllocationTable, Observation
from .utility import AlternativeSet, UtilityFunction, Valuation, ql_from_valuation
from .verification import Agent, Scenario

SCHEMA_VERSION = 1


def _reject_float(text: str):
    raise InputError(f"floats are not accepted, write {text!r} as a 'p/q' string")


def _reject_constant(text: str):
    raise InputError(f"{text} is not a number")


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise InputError(f"duplicate key {k!r}")
        out[k] = v
    return out


def loads(text: str) -> Any:
    try:
        return json.loads(
            text, parse_float=_reject_float, parse_constant=_reject_constant, object_pairs_hook=_no_duplicates
        )
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _sorted_keys(obj):
    if isinstance(obj, dict):
        return {k: _sorted_keys(obj[k]) for k in sorted(obj)}
    if isinstance(obj, list):
        return [_sorted_keys(x) for x in obj]
    return obj


def dumps_report(report: dict) -> str:
    """Keys sorted everywhere except inside the echoed ``input``, which keeps its own order."""
    body = {k: (v if k == "input" else _sorted_keys(v)) for k, v in sorted(report.items())}
    return json.dumps(body, indent=2, ensure_ascii=False) + "\n"


def new_report(command: str, doc: Any) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "input": doc}


# -- parsing ------------------------------------------------------------------


def field(doc: Any, key: str, kind=None, where: str = "document"):
    if not isinstance(doc, dict):
        raise InputError(f"{where} must be a JSON object")
    if key not in doc:
        raise InputError(f"{where} is missing {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise InputError(f"{where}.{key} has the wrong JSON type")
    return value


def rational(value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"expected an integer or 'p/q' string, got {value!r}")
    return as_rational(value)


def parse_alternatives(doc: Any) -> AlternativeSet:
    return AlternativeSet(field(doc, "alternatives", list))


def parse_valuation(obj: Any, alts: AlternativeSet) -> Valuation:
    if not isinstance(obj, dict):
        raise InputError("valuation must map alternatives to rationals")
    return Valuation.from_mapping(alts, {a: rational(x) for a, x in obj.items()})


def parse_curve(obj: Any) -> PiecewiseLinearCurve:
    points = field(obj, "points", list, "curve")
    pts = []
    for p in points:
        if not isinstance(p, list) or len(p) != 2:
            raise InputError("curve points must be [z, u] pairs")
        pts.append((rational(p[0]), rational(p[1])))
    return PiecewiseLinearCurve(
        tuple(pts), rational(field(obj, "left_slope", where="curve")),
        rational(field(obj, "right_slope", where="curve")),
    )


def parse_utility(obj: Any, alts: AlternativeSet) -> UtilityFunction:
    kind = field(obj, "kind", str, "utility")
    if kind == "quasilinear":
        return ql_from_valuation(parse_valuation(field(obj, "valuation", dict, "utility"), alts))
    if kind == "pwl":
        curves = field(obj, "curves", dict, "utility")
        return UtilityFunction.from_mapping(alts, {a: parse_curve(c) for a, c in curves.items()})
    raise InputError(f"unknown utility kind {kind!r}")


def _per_agent(obj: Any, names: Sequence[str], what: str) -> list:
    if isinstance(obj, list):
        if len(obj) != len(names):
            raise InputError(f"{what} needs one entry per agent")
        return list(obj)
    if isinstance(obj, dict):
        if set(obj) != set(names):
            raise InputError(f"{what} keys must be exactly the agent names")
        return [obj[n] for n in names]
    raise InputError(f"{what} must be an array or an object keyed by agent")


def _per_alternative(obj: Any, alts: AlternativeSet, what: str) -> list:
    if isinstance(obj, list):
        if len(obj) != len(alts):
            raise InputError(f"{what} needs one entry per alternative")
        return list(obj)
    if isinstance(obj, dict):
        if set(obj) != set(alts):
            raise InputError(f"{what} keys must be exactly the alternatives")
        return [obj[a] for a in alts]
    raise InputError(f"{what} must be an array or an object keyed by alternative")


def parse_pivot(obj: Any, names: Sequence[str]) -> Pivot:
    kind = field(obj, "kind", str, "pivot")
    try:
        kind = PivotKind(kind)
    except ValueError:
        raise InputError(f"unknown pivot kind {kind!r}") from None
    if kind is PivotKind.CONSTANT:
        values = _per_agent(field(obj, "values", where="pivot"), names, "pivot values")
        return Pivot.constant([rational(v) for v in values])
    return Pivot(kind)


def parse_scenario(doc: Any, mode: Optional[str] = None) -> Scenario:
    alts = parse_alternatives(doc)
    agents_doc = field(doc, "agents", list)
    names = []
    for a in agents_doc:
        name = field(a, "name", str, "agent")
        if name in names:
            raise InputError(f"duplicate agent name {name!r}")
        names.append(name)
    mech = field(doc, "mechanism", dict)
    rep_mode = mode if mode is not None else mech.get("representation_mode", "pos")
    try:
        rep_mode = RepresentationMode(rep_mode)
    except ValueError:
        raise InputError(f"unknown representation mode {rep_mode!r}") from None
    allowed = mech.get("allowed")
    if allowed is not None and not isinstance(allowed, list):
        raise InputError("mechanism.allowed must be an array of alternatives")
    spec = MechanismSpec(
        alts,
        tuple(rational(w) for w in _per_agent(field(mech, "weights", where="mechanism"), names, "weights")),
        tuple(rational(c) for c in _per_alternative(field(mech, "costs", where="mechanism"), alts, "costs")),
        None if allowed is None else tuple(allowed),
        parse_pivot(mech.get("pivot", {"kind": "zero"}), names),
        rep_mode,
    )
    agents = []
    for a, name in zip(agents_doc, names):
        domain = tuple(parse_utility(u, alts) for u in field(a, "type_domain", list, "agent"))
        true_type = a.get("true_type", 0)
        if isinstance(true_type, bool) or not isinstance(true_type, int):
            raise InputError("true_type must be an integer index")
        agents.append(Agent(name, domain, true_type))
    return Scenario(alts, tuple(agents), spec)


def _parse_rows(rows: Any, alts: AlternativeSet, what: str) -> tuple[Observation, ...]:
    if not isinstance(rows, list):
        raise InputError(f"{what} must be an array")
    out = []
    for r in rows:
        profile = field(r, "profile", list, "observation")
        chosen = field(r, "chosen", str, "observation")
        out.append(Observation(tuple(parse_valuation(v, alts) for v in profile), chosen))
    return tuple(out)


def parse_table(doc: Any, key: str = "observations") -> AllocationTable:
    alts = parse_alternatives(doc)
    return AllocationTable(alts, _parse_rows(field(doc, key), alts, key))


def parse_enumeration(doc: Any):
    alts = parse_alternatives(doc)
    domains = [[parse_valuation(v, alts) for v in d] for d in field(doc, "domains", list)]
    caps = doc.get("caps", {})
    if not isinstance(caps, dict):
        raise InputError("caps must be an object")
    limits = {}
    for key in ("max_profiles", "node_cap"):
        if key in caps:
            if isinstance(caps[key], bool) or not isinstance(caps[key], int) or caps[key] < 1:
                raise InputError(f"caps.{key} must be a positive integer")
            limits[key] = caps[key]
    return alts, domains, limits


# -- rendering ----------------------------------------------------------------


def r(x: Fraction) -> str:
    return format_rational(x)


def valuation_json(v: Valuation) -> dict:
    return {a: r(x) for a, x in v.items()}


def outcome_json(out: Outcome, names: Sequence[str]) -> dict:
    return {
        "chosen": out.chosen,
        "payments": {n: r(p) for n, p in zip(names, out.payments)},
        "canonical_valuations": {n: valuation_json(v) for n, v in zip(names, out.canonical_valuations)},
    }


def fit_json(fit: Optional[AffineFit], names: Sequence[str], alts: Sequence[str]) -> dict:
    if fit is None:
        return {"feasible": False}
    return {
        "feasible": True,
        "weights": {n: r(w) for n, w in zip(names, fit.weights)},
        "costs": {a: r(c) for a, c in zip(alts, fit.costs)},
        "agreement": r(fit.agreement),
    }


def witness_json(obj: Any) -> Any:
    """Render nested witness data: Fractions become strings, tuples become lists."""
    if isinstance(obj, Fraction):
        return r(obj)
    if isinstance(obj, dict):
        return {str(k): witness_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [witness_json(x) for x in obj]
    return obj
