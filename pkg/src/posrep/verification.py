"""Exhaustive small-domain verification: incentive compatibility, ontoness, dictatorships."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Iterator, Mapping, Optional, Sequence

from .errors import BudgetExceeded, IncompleteTable, InputError
from .mechanism import MechanismSpec, Outcome, canonical_classification, pivot_bound_holds, run_valuations
from .utility import AlternativeSet, Ordering, UtilityFunction, Valuation, prefers

DEFAULT_BUDGET = 10**6

Profile = tuple[int, ...]


@dataclass(frozen=True)
class Agent:
    name: str
    type_domain: tuple[UtilityFunction, ...]
    true_type: int = 0

    def __post_init__(self):
        domain = tuple(self.type_domain)
        if not domain:
            raise InputError(f"agent {self.name!r} needs a nonempty type domain")
        if not 0 <= self.true_type < len(domain):
            raise InputError(f"agent {self.name!r} true_type index out of range")
        object.__setattr__(self, "type_domain", domain)


@dataclass(frozen=True)
class Scenario:
    alternatives: AlternativeSet
    agents: tuple[Agent, ...]
    spec: MechanismSpec

    def __post_init__(self):
        object.__setattr__(self, "alternatives", AlternativeSet(self.alternatives))
        object.__setattr__(self, "agents", tuple(self.agents))
        if len(self.agents) != self.spec.n_agents:
            raise InputError("scenario needs one weight per agent")
        if tuple(self.spec.alternatives) != tuple(self.alternatives):
            raise InputError("mechanism and scenario alternatives differ")

    @property
    def true_profile(self) -> Profile:
        return tuple(a.true_type for a in self.agents)

    def profiles(self) -> Iterator[Profile]:
        return product(*(range(len(a.type_domain)) for a in self.agents))

    def profile_count(self) -> int:
        return prod(len(a.type_domain) for a in self.agents)

    def true_types(self) -> list[UtilityFunction]:
        return [a.type_domain[a.true_type] for a in self.agents]


@dataclass
class _Solved:
    """Every profile's outcome, with each domain type classified once."""

    classifications: list
    outcomes: dict


def _solve(sc: Scenario, budget: int, extra: int = 0) -> _Solved:
    n_profiles = sc.profile_count()
    if n_profiles + extra > budget:
        raise BudgetExceeded(
            f"needs {n_profiles + extra} outcome evaluations, budget is {budget}",
            needed=n_profiles + extra, budget=budget,
        )
    classes = [
        [canonical_classification(sc.spec, i, u, type_index=k) for k, u in enumerate(agent.type_domain)]
        for i, agent in enumerate(sc.agents)
    ]
    outcomes = {}
    for prof in sc.profiles():
        vals = [classes[i][k].valuation for i, k in enumerate(prof)]
        outcomes[prof] = run_valuations(sc.spec, vals)
    return _Solved(classes, outcomes)


@dataclass(frozen=True)
class Violation:
    agent: int
    true_type: int
    misreport: int
    profile: Profile  # truthful profile; the misreport replaces entry ``agent``
    truthful: Outcome
    deviating: Outcome

    def deviating_profile(self) -> Profile:
        p = list(self.profile)
        p[self.agent] = self.misreport
        return tuple(p)


@dataclass(frozen=True)
class ICReport:
    holds: bool
    violations: list = field(default_factory=list)
    evaluations: int = 0


def verify_ic(sc: Scenario, budget: int = DEFAULT_BUDGET) -> ICReport:
    """Check every agent, true type, misreport and opponent profile.

    Outcomes are compared under the agent's true preference, not under any
    quasi-linear stand-in. Violations come back in profile order.
    """
    n_profiles = sc.profile_count()
    comparisons = sum(n_profiles * len(a.type_domain) for a in sc.agents)
    solved = _solve(sc, budget, extra=comparisons)
    violations = []
    for prof in sc.profiles():
        truthful = solved.outcomes[prof]
        for i, agent in enumerate(sc.agents):
            true_u = agent.type_domain[prof[i]]
            mine = (truthful.chosen, truthful.payments[i])
            for k in range(len(agent.type_domain)):
                if k == prof[i]:
                    continue
                dev = solved.outcomes[prof[:i] + (k,) + prof[i + 1:]]
                if prefers(true_u, (dev.chosen, dev.payments[i]), mine) is Ordering.GREATER:
                    violations.append(Violation(i, prof[i], k, prof, truthful, dev))
    return ICReport(not violations, violations, n_profiles + comparisons)


@dataclass(frozen=True)
class OntoReport:
    onto: bool
    witnesses: dict  # alternative -> profile, or None when never chosen

    def __bool__(self):
        return self.onto


def verify_onto(sc: Scenario, budget: int = DEFAULT_BUDGET) -> OntoReport:
    solved = _solve(sc, budget)
    witnesses = {a: None for a in sc.alternatives}
    for prof, out in solved.outcomes.items():
        if witnesses[out.chosen] is None:
            witnesses[out.chosen] = prof
    return OntoReport(all(w is not None for w in witnesses.values()), witnesses)


def pivot_bound_everywhere(sc: Scenario) -> tuple[bool, Optional[Profile]]:
    """Whether the payment bound holds for all agents at every profile; first failing profile otherwise."""
    classes = [
        [canonical_classification(sc.spec, i, u, type_index=k) for k, u in enumerate(agent.type_domain)]
        for i, agent in enumerate(sc.agents)
    ]
    for prof in sc.profiles():
        if not all(pivot_bound_holds(sc.spec, [classes[i][k] for i, k in enumerate(prof)])):
            return False, prof
    return True, None


def allocation_table(sc: Scenario, budget: int = DEFAULT_BUDGET) -> dict:
    """Chosen alternative at every profile of type indices."""
    return {p: o.chosen for p, o in _solve(sc, budget).outcomes.items()}


def is_dictatorial(table: Mapping[Profile, str], domains: Sequence[Sequence[Valuation]]) -> set:
    """Agents whose favourite alternatives always contain the table's choice."""
    profiles = list(product(*(range(len(d)) for d in domains)))
    missing = [p for p in profiles if p not in table]
    if missing:
        raise IncompleteTable(f"table has no entry for profile {missing[0]}", profile=missing[0])
    return {
        d for d in range(len(domains))
        if all(table[p] in domains[d][p[d]].argmax() for p in profiles)
    }


def enumerate_ic_onto_no_transfer(
    alternatives: Sequence[str],
    domains: Sequence[Sequence[Valuation]],
    max_profiles: int = 40,
    node_cap: int = 10**7,
) -> list[dict]:
    """All allocation tables that are onto and incentive compatible at zero payments.

    Depth-first over profiles with forward checking: assigning a profile
    immediately removes, from every profile that differs in one agent's type,
    the alternatives that would give either type a reason to lie.
    """
    alts = AlternativeSet(alternatives)
    for d in domains:
        if not d:
            raise InputError("every agent needs a nonempty domain")
        for v in d:
            if tuple(v.alternatives) != tuple(alts):
                raise InputError("domain valuations must use the given alternatives")
    profiles = list(product(*(range(len(d)) for d in domains)))
    if len(profiles) > max_profiles:
        raise BudgetExceeded(
            f"{len(profiles)} profiles exceed the enumeration guard of {max_profiles}",
            profiles=len(profiles), max_profiles=max_profiles,
        )
    index = {p: k for k, p in enumerate(profiles)}
    value = [[[v[a] for a in alts] for v in d] for d in domains]
    m = len(alts)

    # neighbours[k]: (other profile index, deviating agent)
    neighbours = [[] for _ in profiles]
    for k, p in enumerate(profiles):
        for i, d in enumerate(domains):
            for t in range(len(d)):
                if t != p[i]:
                    neighbours[k].append((index[p[:i] + (t,) + p[i + 1:]], i))

    def allowed_given(k: int, x: int, j: int, i: int) -> list[int]:
        # profile j differs from profile k only in agent i's type; k is assigned x
        ti, tj = profiles[k][i], profiles[j][i]
        vk, vj = value[i][ti], value[i][tj]
        return [y for y in range(m) if vj[y] >= vj[x] and vk[x] >= vk[y]]

    results = []
    assignment = [None] * len(profiles)
    nodes = 0

    def search(candidates: list[set]):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise BudgetExceeded(f"search exceeded {node_cap} nodes", node_cap=node_cap)
        open_ = [k for k in range(len(profiles)) if assignment[k] is None]
        if not open_:
            if len(set(assignment)) == m:
                results.append({profiles[k]: alts[x] for k, x in enumerate(assignment)})
            return
        used = {x for x in assignment if x is not None}
        reachable = used.union(*(candidates[k] for k in open_))
        if len(reachable) < m:
            return
        k = min(open_, key=lambda j: (len(candidates[j]), j))
        for x in sorted(candidates[k]):
            narrowed = list(candidates)
            dead = False
            for j, i in neighbours[k]:
                if assignment[j] is None:
                    narrowed[j] = narrowed[j].intersection(allowed_given(k, x, j, i))
                    if not narrowed[j]:
                        dead = True
                        break
            if dead:
                continue
            assignment[k] = x
            search(narrowed)
            assignment[k] = None

    search([set(range(m)) for _ in profiles])
    results.sort(key=lambda t: [alts.position(t[p]) for p in profiles])
    return results


def no_transfer_ic(table: Mapping[Profile, str], domains: Sequence[Sequence[Valuation]]) -> bool:
    """Whether no agent ever gains by misreporting when nobody pays anything."""
    for p, x in table.items():
        for i, d in enumerate(domains):
            v = d[p[i]]
            for t in range(len(d)):
                if v[table[p[:i] + (t,) + p[i + 1:]]] > v[x]:
                    return False
    return True


def is_onto(table: Mapping[Profile, str], alternatives: Sequence[str]) -> bool:
    return set(table.values()) == set(alternatives)
