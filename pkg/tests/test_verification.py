import random
from fractions import Fraction as F
from itertools import permutations, product
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import generators as gen
from posrep.errors import BudgetExceeded, IncompleteTable, InputError, TypeNotPosRepresentable
from posrep.mechanism import MechanismSpec, Pivot, run
from posrep.pwl import curve_from_segments
from posrep.utility import Ordering, UtilityFunction, Valuation, prefers, ql_from_valuation
from posrep.verification import (
    Agent,
    Scenario,
    allocation_table,
    enumerate_ic_onto_no_transfer,
    is_dictatorial,
    is_onto,
    no_transfer_ic,
    pivot_bound_everywhere,
    verify_ic,
    verify_onto,
)

ABC = ("a", "b", "c")
HALF = (F(1, 2), F(1, 2))
QL_DOMAIN = [ql_from_valuation(Valuation(ABC, v)) for v in [(2, 1, 0), (0, 2, 1), (1, 0, 2)]]
RANKINGS = [Valuation(ABC, p) for p in permutations((0, 1, 2))]


def steep_domain():
    # quasi-linear above level 0, steeper for the favourite below it
    out = []
    for vals, rights in [((2, 1, 0), (-1, -3, -1)), ((0, 2, 1), (-3, -1, -1)), ((1, 0, 2), (-1, -1, -3))]:
        out.append(UtilityFunction(ABC, tuple(curve_from_segments([(v, 0)], -1, s) for v, s in zip(vals, rights))))
    return out


def two_agents(spec, domain=QL_DOMAIN):
    return Scenario(ABC, (Agent("agent1", domain, 0), Agent("agent2", domain, 1)), spec)


def brute_force_violations(sc):
    """Oracle: rerun the mechanism for every profile and misreport."""
    count = 0
    for prof in sc.profiles():
        types = [a.type_domain[k] for a, k in zip(sc.agents, prof)]
        truthful = run(sc.spec, types)
        for i, agent in enumerate(sc.agents):
            for k, lie in enumerate(agent.type_domain):
                if k == prof[i]:
                    continue
                reported = list(types)
                reported[i] = lie
                dev = run(sc.spec, reported)
                if prefers(types[i], (dev.chosen, dev.payments[i]), (truthful.chosen, truthful.payments[i])) > 0:
                    count += 1
    return count


def test_clarke_scenario_is_ic():
    sc = two_agents(MechanismSpec(ABC, HALF, (0, 0, 0), pivot=Pivot.clarke()))
    rep = verify_ic(sc)
    assert rep.holds and rep.violations == []
    assert rep.evaluations == 9 + 2 * 9 * 3


def test_bound_violating_constant_pivot_is_not_ic():
    spec = MechanismSpec(ABC, HALF, (0, 0, 0), pivot=Pivot.constant([10, 0]))
    sc = two_agents(spec, steep_domain())
    ok, failing = pivot_bound_everywhere(sc)
    assert not ok and failing == (0, 0)
    rep = verify_ic(sc)
    assert not rep.holds
    assert len(rep.violations) == brute_force_violations(sc) == 4
    for v in rep.violations:
        true_u = sc.agents[v.agent].type_domain[v.true_type]
        assert prefers(true_u, (v.deviating.chosen, v.deviating.payments[v.agent]),
                       (v.truthful.chosen, v.truthful.payments[v.agent])) is Ordering.GREATER
        types = [a.type_domain[k] for a, k in zip(sc.agents, v.deviating_profile())]
        assert run(spec, types) == v.deviating


def test_single_agent_zero_pivot_is_ic():
    sc = Scenario(ABC, (Agent("solo", steep_domain() + QL_DOMAIN, 0),), MechanismSpec(ABC, (1,), (0, 0, 0)))
    assert verify_ic(sc).holds


def test_budget_guard():
    sc = two_agents(MechanismSpec(ABC, HALF, (0, 0, 0), pivot=Pivot.clarke()))
    with pytest.raises(BudgetExceeded):
        verify_ic(sc, budget=10)
    with pytest.raises(BudgetExceeded):
        verify_onto(sc, budget=5)


def test_domain_type_must_classify():
    never = UtilityFunction(ABC, (curve_from_segments([(0, 0)], -2, -1),) + tuple(QL_DOMAIN[0].curves[1:]))
    sc = Scenario(ABC, (Agent("agent1", [QL_DOMAIN[0], never], 0),), MechanismSpec(ABC, (1,), (0, 0, 0)))
    with pytest.raises(TypeNotPosRepresentable) as exc:
        verify_ic(sc)
    assert exc.value.details == {"agent": 0, "type_index": 1}


def test_onto_examples():
    dictator = Scenario(ABC, (Agent("d", QL_DOMAIN, 0), Agent("x", QL_DOMAIN[:1], 0)),
                        MechanismSpec(ABC, (1, 0), (0, 0, 0)))
    assert verify_onto(dictator).onto
    restricted = two_agents(MechanismSpec(ABC, HALF, (0, 0, 0), allowed=("a", "b"), pivot=Pivot.clarke()))
    rep = verify_onto(restricted)
    assert not rep.onto and rep.witnesses["c"] is None
    sc = two_agents(MechanismSpec(ABC, HALF, (0, 0, 0), pivot=Pivot.clarke()))
    clarke = verify_onto(sc)
    assert clarke.onto
    # first profile, in enumeration order, that yields each alternative
    assert clarke.witnesses == {"a": (0, 0), "b": (0, 1), "c": (1, 2)}
    for alt, prof in clarke.witnesses.items():
        assert run(sc.spec, [QL_DOMAIN[k] for k in prof]).chosen == alt


def test_is_dictatorial_examples():
    spec = MechanismSpec(ABC, (1, 0), (0, 0, 0))
    domains = [RANKINGS, RANKINGS]
    sc = Scenario(ABC, tuple(Agent(f"agent{i}", [ql_from_valuation(v) for v in RANKINGS]) for i in (1, 2)), spec)
    table = allocation_table(sc)
    assert is_dictatorial(table, domains) == {0}
    constant = {p: "a" for p in table}
    assert is_dictatorial(constant, domains) == set()
    solo = {(k,): v.argmax()[0] for k, v in enumerate(RANKINGS)}
    assert is_dictatorial(solo, [RANKINGS]) == {0}
    with pytest.raises(IncompleteTable):
        is_dictatorial({(0,): "a"}, [RANKINGS])


def brute_force_tables(alts, domains):
    profiles = list(product(*(range(len(d)) for d in domains)))
    out = []
    for choice in product(alts, repeat=len(profiles)):
        table = dict(zip(profiles, choice))
        if is_onto(table, alts) and no_transfer_ic(table, domains):
            out.append(table)
    return out


def test_enumeration_one_agent_matches_brute_force():
    tables = enumerate_ic_onto_no_transfer(ABC, [RANKINGS])
    assert len(tables) == 1
    assert tables[0] == {(k,): v.argmax()[0] for k, v in enumerate(RANKINGS)}
    oracle = brute_force_tables(ABC, [RANKINGS])  # all 3**6 = 729 tables
    assert oracle == tables


def test_enumeration_two_agents_full_rankings():
    tables = enumerate_ic_onto_no_transfer(ABC, [RANKINGS, RANKINGS])
    assert len(tables) == 2
    assert sorted(tuple(sorted(is_dictatorial(t, [RANKINGS, RANKINGS]))) for t in tables) == [(0,), (1,)]


def test_enumeration_singleton_domains_not_onto():
    ab = ("a", "b")
    assert enumerate_ic_onto_no_transfer(ab, [[Valuation(ab, (1, 0))], [Valuation(ab, (0, 1))]]) == []


def test_enumeration_guards():
    with pytest.raises(BudgetExceeded):
        enumerate_ic_onto_no_transfer(ABC, [RANKINGS] * 3)
    with pytest.raises(BudgetExceeded):
        enumerate_ic_onto_no_transfer(ABC, [RANKINGS, RANKINGS], node_cap=5)
    with pytest.raises(InputError):
        enumerate_ic_onto_no_transfer(ABC, [[]])


seeds = st.integers(min_value=0, max_value=10**9)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_enumeration_matches_brute_force_on_small_domains(seed):
    r = random.Random(seed)
    m = r.choice([2, 3])
    alts = ABC[:m]
    sizes = r.choice([[2, 2], [3], [2], [3, 2], [1, 3]])
    if m ** prod(sizes) > 3 ** 6:
        return
    domains = [[Valuation(alts, tuple(r.randint(0, 2) for _ in alts)) for _ in range(k)] for k in sizes]
    assert enumerate_ic_onto_no_transfer(alts, domains) == brute_force_tables(alts, domains)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_verify_ic_matches_brute_force(seed):
    r = random.Random(seed)
    sc = gen.random_violation_scenario(r) if seed % 2 else gen.random_bounded_scenario(r)
    if sc.profile_count() > 16:
        return
    assert len(verify_ic(sc).violations) == brute_force_violations(sc)
