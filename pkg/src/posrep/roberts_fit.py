"""Recover affine-maximizer parameters from observed choices.

Given rows ``(profile of quasi-linear valuations, chosen alternative)``,
find agent weights ``w`` on the simplex and alternative costs ``c`` such
that every observed choice maximizes ``c_a + sum_i w_i v_i(a)``, ties
allowed. The search is exact: Fourier-Motzkin over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import AlternativeMismatch, EmptyTable, InputError, TooManyVariables
from .fourier_motzkin import Inequality, solve
from .mechanism import MechanismSpec, choose_alternative
from .utility import AlternativeSet, Valuation

MAX_VARIABLES = 12


@dataclass(frozen=True)
class Observation:
    profile: tuple[Valuation, ...]
    chosen: str


@dataclass(frozen=True)
class AllocationTable:
    alternatives: AlternativeSet
    observations: tuple[Observation, ...]

    def __post_init__(self):
        alts = AlternativeSet(self.alternatives)
        obs = tuple(self.observations)
        if not obs:
            raise EmptyTable("allocation table has no observations")
        n = len(obs[0].profile)
        for o in obs:
            alts.require(o.chosen)
            if len(o.profile) != n or n == 0:
                raise InputError("every observation needs one valuation per agent")
            if any(tuple(v.alternatives) != tuple(alts) for v in o.profile):
                raise AlternativeMismatch("observation valuations use different alternatives")
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "observations", obs)

    @property
    def n_agents(self) -> int:
        return len(self.observations[0].profile)


@dataclass(frozen=True)
class AffineFit:
    weights: tuple[Fraction, ...]
    costs: tuple[Fraction, ...]
    agreement: Fraction

    def scores(self, alternatives: Sequence[str], profile: Sequence[Valuation]) -> list[Fraction]:
        return [c + sum(w * v[a] for w, v in zip(self.weights, profile))
                for a, c in zip(alternatives, self.costs)]

    def argmax(self, alternatives: Sequence[str], profile: Sequence[Valuation]) -> list[str]:
        s = self.scores(alternatives, profile)
        top = max(s)
        return [a for a, x in zip(alternatives, s) if x == top]


def predict(fit: AffineFit, table: AllocationTable) -> Fraction:
    """Fraction of rows whose observed choice is among the fit's maximizers."""
    if len(fit.costs) != len(table.alternatives) or len(fit.weights) != table.n_agents:
        raise AlternativeMismatch("fit and table disagree on alternatives or agents")
    hits = sum(o.chosen in fit.argmax(table.alternatives, o.profile) for o in table.observations)
    return Fraction(hits, len(table.observations))


def fit_affine_maximizer(table: AllocationTable, max_variables: int = MAX_VARIABLES) -> Optional[AffineFit]:
    """A rationalizing ``(w, c)``, or None when no affine maximizer fits the table.

    Any feasible point may come back; back-substitution takes interval
    midpoints, so it tends to sit inside the feasible region.
    """
    alts, n = table.alternatives, table.n_agents
    m = len(alts)
    if n + m > max_variables:
        raise TooManyVariables(f"{n} agents + {m} alternatives exceeds the limit of {max_variables}")
    # Unknowns: w_0..w_{n-2}, c_1..c_{m-1}. w_{n-1} = 1 - sum, c_0 = 0.
    nw, nc = n - 1, m - 1
    n_vars = nw + nc

    def affine_in_unknowns(profile, a, b):
        # (c_a + w.v(a)) - (c_b + w.v(b)) as (coeffs, const)
        coeffs = [Fraction(0)] * n_vars
        const = Fraction(0)
        last = profile[n - 1][a] - profile[n - 1][b]
        const += last
        for i in range(nw):
            coeffs[i] += (profile[i][a] - profile[i][b]) - last
        ia, ib = alts.position(a), alts.position(b)
        if ia:
            coeffs[nw + ia - 1] += 1
        if ib:
            coeffs[nw + ib - 1] -= 1
        return coeffs, const

    rows = []
    for o in table.observations:
        for b in alts:
            if b == o.chosen:
                continue
            coeffs, const = affine_in_unknowns(o.profile, o.chosen, b)
            rows.append(Inequality(tuple(coeffs), const))
    for i in range(nw):
        coeffs = [Fraction(0)] * n_vars
        coeffs[i] = Fraction(1)
        rows.append(Inequality(tuple(coeffs), Fraction(0)))
    coeffs = [Fraction(0)] * n_vars
    for i in range(nw):
        coeffs[i] = Fraction(-1)
    rows.append(Inequality(tuple(coeffs), Fraction(1)))

    point = solve(rows, n_vars)
    if point is None:
        return None
    weights = tuple(point[:nw]) + (1 - sum(point[:nw], Fraction(0)),)
    costs = (Fraction(0),) + tuple(point[nw:nw + nc])
    fit = AffineFit(weights, costs, Fraction(0))
    return AffineFit(weights, costs, predict(fit, table))


def tabulate(spec: MechanismSpec, profiles: Sequence[Sequence[Valuation]]) -> AllocationTable:
    """Observed choices of the affine rule ``spec`` on the given valuation profiles."""
    rows = tuple(Observation(tuple(p), choose_alternative(spec, p)) for p in profiles)
    return AllocationTable(spec.alternatives, rows)
