"""Representation by quasi-linear utilities: classification, exact checks, grid checks.

A quasi-linear valuation ``v`` pos-represents a type when the type's
comparisons agree with ``v(a) - z`` whenever one side has nonnegative
quasi-linear value. For curve-based types this holds exactly when every
curve reaches one common level at ``z = v(a)`` and all curves are
horizontal translates of each other above that level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from .errors import AlternativeMismatch, EmptyGrid, MissingAnchor
from .pwl import ConstantFrom, NeverConstant, alignment_level, as_rational, pwl_inverse
from .utility import Ordering, UtilityFunction, Valuation, prefers, utility_eval


class Kind(str, Enum):
    REPRESENTED = "represented"
    POS_REPRESENTED = "pos_represented"
    NOT_POS_REPRESENTABLE = "not_pos_representable"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    valuation: Optional[Valuation] = None
    # actual-utility level reached by every curve at payment v(a)
    threshold_level: Optional[Fraction] = None

    @property
    def pos_representable(self) -> bool:
        return self.kind is not Kind.NOT_POS_REPRESENTABLE


def classify(u: UtilityFunction) -> Classification:
    """Classify ``u`` and return its canonical (maximal) quasi-linear pos-representation.

    Represented types get ``v(a) = z_a(0)``; any constant shift of that also
    represents them. Pos-represented types get the highest valid shift: the
    payments at the lowest level from which all curves are translates.
    """
    start = None
    for a, b in combinations(u.curves, 2):
        res = alignment_level(a, b)
        if isinstance(res, NeverConstant):
            return Classification(Kind.NOT_POS_REPRESENTABLE)
        if isinstance(res, ConstantFrom):
            start = res.level if start is None else max(start, res.level)
    if start is None:
        values = tuple(pwl_inverse(c, 0) for c in u.curves)
        return Classification(Kind.REPRESENTED, Valuation(u.alternatives, values))
    values = tuple(pwl_inverse(c, start) for c in u.curves)
    return Classification(Kind.POS_REPRESENTED, Valuation(u.alternatives, values), start)


def normalize_min_zero(v: Valuation) -> Valuation:
    return v.shifted(-min(v.values))


@dataclass(frozen=True)
class PosRepWitness:
    """Two outcomes, at least one with nonnegative quasi-linear value, ordered differently."""

    first: tuple[str, Fraction]
    second: tuple[str, Fraction]
    ql_values: tuple[Fraction, Fraction]
    utility_values: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class PosRepCheck:
    holds: bool
    witness: Optional[PosRepWitness] = None

    def __bool__(self):
        return self.holds


def _disagreement(v: Valuation, u: UtilityFunction, a: str, za, b: str, zb) -> Optional[PosRepWitness]:
    qa, qb = v[a] - za, v[b] - zb
    if qa < 0 and qb < 0:
        return None
    ua, ub = utility_eval(u, a, za), utility_eval(u, b, zb)
    if Ordering.of(qa, qb) is Ordering.of(ua, ub):
        return None
    return PosRepWitness((a, za), (b, zb), (qa, qb), (ua, ub))


def _find_posrep_witness(v: Valuation, u: UtilityFunction) -> PosRepWitness:
    alts = u.alternatives
    floor = min(v.values)
    # Probe common payments first; at floor - 1 every quasi-linear value is strictly positive.
    probes = [floor - 1, floor]
    probes += sorted({z for c in u.curves for z in c.payments if z < floor - 1}, reverse=True)
    for z in probes:
        for a, b in combinations(alts, 2):
            w = _disagreement(v, u, a, z, b, z)
            if w is not None:
                return w
    anchors = {a: utility_eval(u, a, v[a]) for a in alts}
    for a, b in combinations(alts, 2):
        if anchors[a] != anchors[b]:
            return _disagreement(v, u, a, v[a], b, v[b])
    top = anchors[alts[0]]
    for a, b in combinations(alts, 2):
        ca, cb = u.curve(a), u.curve(b)
        levels = sorted({lam for lam in ca.levels + cb.levels if lam > top})
        for lam in levels + [max(levels + [top]) + 1]:
            w = _disagreement(v, u, a, pwl_inverse(ca, lam), b, pwl_inverse(cb, lam))
            if w is not None:
                return w
    raise AssertionError("no witness found for a failed pos-representation check")


def is_posrep_of(v: Valuation, u: UtilityFunction) -> PosRepCheck:
    """Decide exactly whether ``v`` pos-represents the preference induced by ``u``."""
    if tuple(v.alternatives) != tuple(u.alternatives):
        raise AlternativeMismatch("valuation and utility use different alternatives")
    anchors = {utility_eval(u, a, x) for a, x in v.items()}
    holds = len(anchors) == 1
    if holds:
        (top,) = anchors
        for a, b in combinations(u.curves, 2):
            res = alignment_level(a, b)
            if isinstance(res, NeverConstant) or (isinstance(res, ConstantFrom) and res.level > top):
                holds = False
                break
    if holds:
        return PosRepCheck(True)
    return PosRepCheck(False, _find_posrep_witness(v, u))


@dataclass(frozen=True)
class ParallelWitness:
    first: str
    second: str
    payment: Fraction
    lhs: Fraction  # u(first, payment + W_first - W_second)
    rhs: Fraction  # u(second, payment)


@dataclass(frozen=True)
class ParallelReport:
    is_parallel: bool
    wtp: dict
    witness: Optional[ParallelWitness] = None


def is_parallel(u: UtilityFunction) -> ParallelReport:
    """Exact test of the parallel-utility condition.

    ``W_a`` is the payment at which ``a`` is as good as the worst alternative
    for free. For ``u(a,0) >= u(b,0)`` the curves must satisfy
    ``u(a, z + W_a - W_b) = u(b, z)`` on ``0 <= z <= W_b``; both sides are
    piecewise linear there, so checking every breakpoint decides it.
    """
    alts = u.alternatives
    worst = min(utility_eval(u, a, 0) for a in alts)
    wtp = {a: pwl_inverse(u.curve(a), worst) for a in alts}
    for a in alts:
        for b in alts:
            if a == b or utility_eval(u, a, 0) < utility_eval(u, b, 0):
                continue
            shift = wtp[a] - wtp[b]
            hi = wtp[b]
            cuts = {Fraction(0), hi}
            cuts.update(z for z in u.curve(b).payments if 0 <= z <= hi)
            cuts.update(z - shift for z in u.curve(a).payments if 0 <= z - shift <= hi)
            for z in sorted(cuts):
                lhs, rhs = utility_eval(u, a, z + shift), utility_eval(u, b, z)
                if lhs != rhs:
                    return ParallelReport(False, wtp, ParallelWitness(a, b, z, lhs, rhs))
    return ParallelReport(True, wtp)


class Mode(str, Enum):
    FULL = "full"
    POSITIVE = "positive"


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    witness: Optional[dict] = None
    violations: int = 0
    note: str = ""


@dataclass(frozen=True)
class ConditionReport:
    mode: Mode
    anchor: tuple[str, Fraction]
    conditions: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __getitem__(self, name: str) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)


def default_anchor(u: UtilityFunction) -> tuple[str, Fraction]:
    """Reference outcome: the alternative with the lowest canonical value, at that value."""
    cls = classify(u)
    if not cls.pos_representable:
        raise MissingAnchor("type is not pos-representable; supply an anchor outcome")
    v = cls.valuation
    a = min(v.alternatives, key=lambda x: (v[x], v.alternatives.position(x)))
    return a, v[a]


def shift_breaks_order(u: UtilityFunction, x: str, zx, y: str, zy, alpha) -> bool:
    """True when lowering both payments by ``alpha`` flips a weak comparison."""
    before = prefers(u, (x, zx), (y, zy))
    after = prefers(u, (x, zx - alpha), (y, zy - alpha))
    return (before >= 0 and after < 0) or (before <= 0 and after > 0)


def check_type_conditions(
    u: UtilityFunction,
    grid: Iterable,
    mode: Mode | str = Mode.FULL,
    anchor: Optional[tuple[str, object]] = None,
) -> ConditionReport:
    """Grid-restricted check of the preference-level characterization.

    Full mode checks continuity, unboundedness around the anchor and
    invariance of every comparison under common payment shifts. Positive mode
    checks unboundedness and shift invariance for nonnegative shifts of
    comparisons whose better side is weakly above the anchor.
    """
    mode = Mode(mode)
    grid = sorted({as_rational(g) for g in grid})
    if not grid:
        raise EmptyGrid("grid of payments must be nonempty")
    if anchor is None:
        anchor = default_anchor(u)
    a_star, z_star = anchor[0], as_rational(anchor[1])
    u.alternatives.require(a_star)
    alts = u.alternatives
    results = []

    if mode is Mode.FULL:
        results.append(ConditionResult(
            "continuity", True,
            note="curves are continuous by construction; not decidable from finitely many comparisons",
        ))

    missing = None
    for x in alts:
        above = any(prefers(u, (x, z), (a_star, z_star)) > 0 for z in grid)
        below = any(prefers(u, (x, z), (a_star, z_star)) < 0 for z in grid)
        if not (above and below):
            missing = {"alternative": x, "has_better": above, "has_worse": below}
            break
    results.append(ConditionResult("unbounded", missing is None, missing))

    shifts = sorted({g - h for g in grid for h in grid})
    if mode is Mode.POSITIVE:
        shifts = [s for s in shifts if s >= 0]
    first, count = None, 0
    pairs = combinations(alts, 2) if mode is Mode.FULL else permutations(alts, 2)
    for x, y in pairs:
        for zx in grid:
            if mode is Mode.POSITIVE and prefers(u, (x, zx), (a_star, z_star)) < 0:
                continue
            for zy in grid:
                if mode is Mode.POSITIVE and prefers(u, (x, zx), (y, zy)) < 0:
                    continue
                for alpha in shifts:
                    if mode is Mode.FULL:
                        bad = shift_breaks_order(u, x, zx, y, zy, alpha)
                    else:
                        bad = prefers(u, (x, zx - alpha), (y, zy - alpha)) < 0
                    if bad:
                        count += 1
                        if first is None:
                            first = {"x": x, "y": y, "z_x": zx, "z_y": zy, "alpha": alpha}
    results.append(ConditionResult("shift_invariance", count == 0, first, count))
    return ConditionReport(mode, (a_star, z_star), results)


def same_preference_on(u1: UtilityFunction, u2: UtilityFunction, pairs: Sequence) -> bool:
    """Whether two utilities order every given pair of outcomes identically."""
    return all(prefers(u1, p, q) == prefers(u2, p, q) for p, q in pairs)
