"""Regenerate the sample inputs under data/. Deterministic; rerun after format changes."""

import json
from fractions import Fraction
from itertools import combinations, permutations, product
from pathlib import Path

from posrep.mechanism import MechanismSpec
from posrep.roberts_fit import tabulate
from posrep.utility import Valuation

DATA = Path(__file__).resolve().parent.parent / "data"


def q(x):
    return str(Fraction(x))


def curve(z, left, right, more=()):
    return {"points": [[q(z), "0"], *[[q(a), q(b)] for a, b in more]], "left_slope": q(left), "right_slope": q(right)}


EXAMPLE3 = {
    "kind": "pwl",
    "curves": {
        "a": curve(-3, -1, Fraction(-1, 3)),
        "b": curve(-2, -1, -1),
        "c": curve(-1, -1, -3),
    },
}
W_TYPE = {
    "kind": "pwl",
    "curves": {"a": curve(1, -1, -1), "b": curve(2, -1, -2), "c": curve(3, -1, -3)},
}


def ql(*values):
    return {"kind": "quasilinear", "valuation": dict(zip("abc", map(q, values)))}


def write(name, doc):
    (DATA / name).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def main():
    DATA.mkdir(exist_ok=True)
    write("tilted_type.json", {"alternatives": ["a", "b", "c"], "utility": EXAMPLE3})
    write("w_type.json", {
        "alternatives": ["a", "b", "c"], "utility": W_TYPE, "grid": [str(z) for z in range(-2, 7)],
    })
    write("ql_123.json", {"alternatives": ["a", "b", "c"], "utility": ql(1, 2, 3)})
    write("bad_curve.json", {
        "alternatives": ["a"],
        "utility": {"kind": "pwl", "curves": {"a": {"points": [["0", "0"], ["1", "1"]], "left_slope": "-1", "right_slope": "-1"}}},
    })

    two = {"kind": "quasilinear"}
    write("clarke_scenario.json", {
        "alternatives": ["a", "b"],
        "agents": [
            {"name": "agent1", "type_domain": [{**two, "valuation": {"a": "3", "b": "0"}}], "true_type": 0},
            {"name": "agent2", "type_domain": [{**two, "valuation": {"a": "0", "b": "1"}}], "true_type": 0},
        ],
        "mechanism": {"weights": ["1/2", "1/2"], "costs": {"a": "0", "b": "0"}, "pivot": {"kind": "clarke"}},
    })
    write("mixed_scenario.json", {
        "alternatives": ["a", "b", "c"],
        "agents": [
            {"name": "agent1", "type_domain": [EXAMPLE3], "true_type": 0},
            {"name": "agent2", "type_domain": [W_TYPE], "true_type": 0},
        ],
        "mechanism": {"weights": ["1/2", "1/2"], "costs": {"a": "0", "b": "0", "c": "0"}, "pivot": {"kind": "zero"}},
    })
    domain = [ql(2, 1, 0), ql(0, 2, 1), ql(1, 0, 2)]
    base = {
        "alternatives": ["a", "b", "c"],
        "agents": [
            {"name": "agent1", "type_domain": domain, "true_type": 0},
            {"name": "agent2", "type_domain": domain, "true_type": 1},
        ],
    }
    write("clarke_ic.json", {**base, "mechanism": {
        "weights": ["1/2", "1/2"], "costs": {"a": "0", "b": "0", "c": "0"}, "pivot": {"kind": "clarke"}}})
    # pos-represented but not represented: quasi-linear above level 0, steeper below
    steep = [
        {"kind": "pwl", "curves": {a: curve(v, -1, r) for a, v, r in zip("abc", vals, rights)}}
        for vals, rights in [((2, 1, 0), (-1, -3, -1)), ((0, 2, 1), (-3, -1, -1)), ((1, 0, 2), (-1, -1, -3))]
    ]
    write("constant_pivot_violation.json", {**base, "agents": [
        {"name": "agent1", "type_domain": steep, "true_type": 0},
        {"name": "agent2", "type_domain": steep, "true_type": 1},
    ], "mechanism": {
        "weights": ["1/2", "1/2"], "costs": {"a": "0", "b": "0", "c": "0"},
        "pivot": {"kind": "constant", "values": {"agent1": "10", "agent2": "0"}}}})
    write("restricted_onto.json", {**base, "mechanism": {
        "allowed": ["a", "b"], "weights": ["1/2", "1/2"], "costs": {"a": "0", "b": "0", "c": "0"},
        "pivot": {"kind": "clarke"}}})

    alts = ("a", "b", "c")
    spec = MechanismSpec(alts, (Fraction(1, 3), Fraction(2, 3)), (0, 0, 1))
    pool1 = [Valuation(alts, v) for v in [(0, 1, 2), (3, 0, 1), (1, 4, 0), (2, 2, 2)]]
    pool2 = [Valuation(alts, v) for v in [(1, 0, 0), (0, 3, 1), (2, 1, 3), (0, 0, 0)]]
    train = tabulate(spec, [list(p) for p in product(pool1, pool2)])
    # holdout: midpoints of training profiles that share a choice, so the labels are implied
    seen = {tuple(o.profile) for o in train.observations}
    mids = []
    for o1, o2 in combinations(train.observations, 2):
        if o1.chosen != o2.chosen:
            continue
        mid = tuple(Valuation(alts, [(x + y) / 2 for x, y in zip(v1.values, v2.values)])
                    for v1, v2 in zip(o1.profile, o2.profile))
        if mid not in seen:
            seen.add(mid)
            mids.append(list(mid))
    hold = tabulate(spec, mids[:8])

    def rows(table):
        return [{"profile": [{a: q(x) for a, x in v.items()} for v in o.profile], "chosen": o.chosen}
                for o in table.observations]

    write("fit_table.json", {"alternatives": list(alts), "agents": ["agent1", "agent2"],
                             "observations": rows(train), "holdout": rows(hold)})
    rankings = [{a: q(x) for a, x in zip(alts, p)} for p in permutations((0, 1, 2))]
    write("enumerate_2x6.json", {"alternatives": list(alts), "domains": [rankings, rankings],
                                 "caps": {"max_profiles": 40}})
    write("enumerate_1x6.json", {"alternatives": list(alts), "domains": [rankings]})


if __name__ == "__main__":
    main()
