"""Agent types: one decreasing curve per alternative, and quasi-linear valuations."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Tuple

from .errors import AlternativeMismatch, InputError, UnknownAlternative
from .pwl import MonotoneMap, PiecewiseLinearCurve, RationalLike, as_rational, compose, pwl_eval

Outcome = Tuple[str, Fraction]  # (alternative, payment)


class AlternativeSet(tuple):
    """Ordered, duplicate-free alternative names. The order is the tie-break order."""

    def __new__(cls, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise InputError("alternative set must be nonempty")
        if any(not isinstance(n, str) for n in names):
            raise InputError("alternative names must be strings")
        if len(set(names)) != len(names):
            raise InputError("alternative names must be distinct")
        return super().__new__(cls, names)

    def position(self, name: str) -> int:
        try:
            return self.index(name)
        except ValueError:
            raise UnknownAlternative(f"unknown alternative {name!r}") from None

    def require(self, name: str) -> str:
        self.position(name)
        return name


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    @classmethod
    def of(cls, left: Fraction, right: Fraction) -> "Ordering":
        return cls((left > right) - (left < right))


@dataclass(frozen=True)
class Valuation:
    """Quasi-linear utility ``u(a, z) = values[a] - z``."""

    alternatives: AlternativeSet
    values: tuple[Fraction, ...]

    def __post_init__(self):
        alts = AlternativeSet(self.alternatives)
        vals = tuple(as_rational(v) for v in self.values)
        if len(vals) != len(alts):
            raise InputError("valuation needs exactly one value per alternative")
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, alternatives: Sequence[str], values: Mapping[str, RationalLike]) -> "Valuation":
        alts = AlternativeSet(alternatives)
        if set(values) != set(alts):
            raise AlternativeMismatch("valuation keys must match the alternatives exactly")
        return cls(alts, tuple(values[a] for a in alts))

    def __getitem__(self, alternative: str) -> Fraction:
        return self.values[self.alternatives.position(alternative)]

    def items(self):
        return zip(self.alternatives, self.values)

    def shifted(self, constant: RationalLike) -> "Valuation":
        c = as_rational(constant)
        return Valuation(self.alternatives, tuple(v + c for v in self.values))

    def argmax(self, among: Iterable[str] | None = None) -> list[str]:
        pool = list(self.alternatives if among is None else among)
        best = max(self[a] for a in pool)
        return [a for a in pool if self[a] == best]


@dataclass(frozen=True)
class UtilityFunction:
    alternatives: AlternativeSet
    curves: tuple[PiecewiseLinearCurve, ...]

    def __post_init__(self):
        alts = AlternativeSet(self.alternatives)
        curves = tuple(self.curves)
        if len(curves) != len(alts):
            raise InputError("utility needs exactly one curve per alternative")
        if any(not isinstance(c, PiecewiseLinearCurve) for c in curves):
            raise InputError("utility curves must be PiecewiseLinearCurve instances")
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "curves", curves)

    @classmethod
    def from_mapping(
        cls, alternatives: Sequence[str], curves: Mapping[str, PiecewiseLinearCurve]
    ) -> "UtilityFunction":
        alts = AlternativeSet(alternatives)
        if set(curves) != set(alts):
            raise AlternativeMismatch("curve keys must match the alternatives exactly")
        return cls(alts, tuple(curves[a] for a in alts))

    def curve(self, alternative: str) -> PiecewiseLinearCurve:
        return self.curves[self.alternatives.position(alternative)]

    def __call__(self, alternative: str, z: RationalLike) -> Fraction:
        return utility_eval(self, alternative, z)

    def reparameterized(self, phi: MonotoneMap) -> "UtilityFunction":
        """Same preference, different cardinal utility: ``phi`` applied to every curve."""
        return UtilityFunction(self.alternatives, tuple(compose(phi, c) for c in self.curves))


def utility_eval(u: UtilityFunction, a: str, z: RationalLike) -> Fraction:
    return pwl_eval(u.curve(a), z)


def ql_from_valuation(v: Valuation) -> UtilityFunction:
    return UtilityFunction(
        v.alternatives, tuple(PiecewiseLinearCurve.quasilinear(x) for x in v.values)
    )


def prefers(u: UtilityFunction, first: Outcome, second: Outcome) -> Ordering:
    """Three-way comparison of two (alternative, payment) outcomes under ``u``."""
    (a, za), (b, zb) = first, second
    return Ordering.of(utility_eval(u, a, za), utility_eval(u, b, zb))
