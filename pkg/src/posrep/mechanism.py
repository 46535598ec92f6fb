"""Extended affine VCG mechanism over types pos-represented by quasi-linear utilities.

Each reported type is replaced by its canonical quasi-linear valuation, the
affine objective ``c_a + sum_i w_i v_i(a)`` is maximized over the allowed
alternatives (first maximizer in alternative order wins), and agent ``i``
pays ``h_i - (c_a* + sum_{j != i} w_j v_j(a*)) / w_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError, TypeNotPosRepresentable, TypeNotRepresentable, ZeroWeightAgent
from .pwl import RationalLike, as_rational
from .representation import Classification, Kind, classify
from .utility import AlternativeSet, UtilityFunction, Valuation


class PivotKind(str, Enum):
    ZERO = "zero"
    CLARKE = "clarke"
    CONSTANT = "constant"


@dataclass(frozen=True)
class Pivot:
    kind: PivotKind = PivotKind.ZERO
    values: Optional[tuple[Fraction, ...]] = None  # per agent, CONSTANT only

    def __post_init__(self):
        object.__setattr__(self, "kind", PivotKind(self.kind))
        if self.kind is PivotKind.CONSTANT:
            if self.values is None:
                raise InputError("constant pivot needs one value per agent")
            object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))
        elif self.values is not None:
            raise InputError(f"{self.kind.value} pivot takes no values")

    @classmethod
    def zero(cls):
        return cls(PivotKind.ZERO)

    @classmethod
    def clarke(cls):
        return cls(PivotKind.CLARKE)

    @classmethod
    def constant(cls, values: Sequence[RationalLike]):
        return cls(PivotKind.CONSTANT, tuple(values))


class RepresentationMode(str, Enum):
    POS = "pos"
    FULL = "full"


@dataclass(frozen=True)
class MechanismSpec:
    alternatives: AlternativeSet
    weights: tuple[Fraction, ...]
    costs: tuple[Fraction, ...]
    allowed: Optional[tuple[str, ...]] = None  # None means every alternative
    pivot: Pivot = Pivot()
    representation_mode: RepresentationMode = RepresentationMode.POS

    def __post_init__(self):
        alts = AlternativeSet(self.alternatives)
        weights = tuple(as_rational(w) for w in self.weights)
        costs = tuple(as_rational(c) for c in self.costs)
        allowed = tuple(alts) if self.allowed is None else tuple(self.allowed)
        if not weights:
            raise InputError("mechanism needs at least one agent weight")
        if any(w < 0 for w in weights) or sum(weights) != 1:
            raise InputError("weights must be nonnegative and sum to exactly 1")
        if len(costs) != len(alts):
            raise InputError("mechanism needs one cost per alternative")
        if not allowed:
            raise InputError("allowed alternative set must be nonempty")
        if len(set(allowed)) != len(allowed):
            raise InputError("allowed alternatives must be distinct")
        for a in allowed:
            alts.require(a)
        # keep allowed in the global tie-break order
        allowed = tuple(a for a in alts if a in allowed)
        if self.pivot.kind is PivotKind.CONSTANT and len(self.pivot.values) != len(weights):
            raise InputError("constant pivot needs one value per agent")
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "allowed", allowed)
        object.__setattr__(self, "representation_mode", RepresentationMode(self.representation_mode))

    @property
    def n_agents(self) -> int:
        return len(self.weights)

    def cost(self, alternative: str) -> Fraction:
        return self.costs[self.alternatives.position(alternative)]

    def with_pivot(self, pivot: Pivot) -> "MechanismSpec":
        return MechanismSpec(
            self.alternatives, self.weights, self.costs, self.allowed, pivot, self.representation_mode
        )


@dataclass(frozen=True)
class Outcome:
    chosen: str
    payments: tuple[Fraction, ...]
    canonical_valuations: tuple[Valuation, ...]


def _score(spec: MechanismSpec, valuations: Sequence[Valuation], a: str, skip: Optional[int] = None) -> Fraction:
    total = spec.cost(a)
    for j, (w, v) in enumerate(zip(spec.weights, valuations)):
        if j != skip:
            total += w * v[a]
    return total


def choose_alternative(spec: MechanismSpec, valuations: Sequence[Valuation]) -> str:
    if len(valuations) != spec.n_agents:
        raise InputError("need exactly one valuation per agent")
    best, best_score = None, None
    for a in spec.allowed:
        s = _score(spec, valuations, a)
        if best is None or s > best_score:
            best, best_score = a, s
    return best


def clarke_pivot(spec: MechanismSpec, i: int, valuations: Sequence[Valuation]) -> Fraction:
    """``max_a (c_a + sum_{j != i} w_j v_j(a)) / w_i``; agent i's own entry is ignored."""
    w_i = spec.weights[i]
    if w_i == 0:
        raise ZeroWeightAgent(f"Clarke pivot is undefined for zero-weight agent {i}", agent=i)
    return max(_score(spec, valuations, a, skip=i) for a in spec.allowed) / w_i


def pivot_value(spec: MechanismSpec, i: int, valuations: Sequence[Valuation]) -> Fraction:
    kind = spec.pivot.kind
    if kind is PivotKind.ZERO:
        return Fraction(0)
    if kind is PivotKind.CONSTANT:
        return spec.pivot.values[i]
    return clarke_pivot(spec, i, valuations)


def canonical_classification(spec: MechanismSpec, i: int, u: UtilityFunction, type_index=None) -> Classification:
    """Classify agent ``i``'s report, enforcing what the representation mode accepts."""
    if tuple(u.alternatives) != tuple(spec.alternatives):
        raise InputError(f"agent {i} type uses a different alternative set", agent=i)
    cls = classify(u)
    if spec.representation_mode is RepresentationMode.FULL:
        if cls.kind is not Kind.REPRESENTED:
            raise TypeNotRepresentable(
                f"agent {i} type is not represented by a quasi-linear utility", agent=i, type_index=type_index
            )
    elif not cls.pos_representable:
        raise TypeNotPosRepresentable(
            f"agent {i} type is not pos-represented by a quasi-linear utility", agent=i, type_index=type_index
        )
    return cls


def run_valuations(spec: MechanismSpec, valuations: Sequence[Valuation]) -> Outcome:
    """Mechanism outcome once every report has been turned into a valuation."""
    valuations = tuple(valuations)
    chosen = choose_alternative(spec, valuations)
    payments = []
    for i, w_i in enumerate(spec.weights):
        h = pivot_value(spec, i, valuations)
        if w_i > 0:
            h -= _score(spec, valuations, chosen, skip=i) / w_i
        payments.append(h)
    return Outcome(chosen, tuple(payments), valuations)


def run(spec: MechanismSpec, types: Sequence[UtilityFunction]) -> Outcome:
    if len(types) != spec.n_agents:
        raise InputError("need exactly one type per agent")
    vals = [canonical_classification(spec, i, u).valuation for i, u in enumerate(types)]
    return run_valuations(spec, vals)


def pivot_bound_holds(spec: MechanismSpec, classifications: Sequence[Classification]) -> tuple[bool, ...]:
    """Per-agent check ``h_i <= max_a (c_a + sum_j w_j v_j(a)) / w_i``.

    Valuations are the canonical maximal ones. A type represented outright
    admits arbitrarily high constant shifts, so its agent's bound can always
    be met; zero-weight agents are unconstrained.
    """
    vals = [c.valuation for c in classifications]
    out = []
    for i, w_i in enumerate(spec.weights):
        if w_i == 0 or classifications[i].kind is Kind.REPRESENTED:
            out.append(True)
            continue
        rhs = max(_score(spec, vals, a) for a in spec.allowed) / w_i
        out.append(pivot_value(spec, i, vals) <= rhs)
    return tuple(out)


def verify_pivot_bound(spec: MechanismSpec, types: Sequence[UtilityFunction]) -> tuple[bool, ...]:
    if len(types) != spec.n_agents:
        raise InputError("need exactly one type per agent")
    return pivot_bound_holds(spec, [canonical_classification(spec, i, u) for i, u in enumerate(types)])
