"""Exact strictly decreasing piecewise-linear curves over the rationals.

A curve maps a payment ``z`` to a utility level. It is given by a nonempty
list of breakpoints plus the slopes of the two unbounded tails, and always
describes a continuous, strictly decreasing bijection of the rational line.
Every operation here is exact; nothing is ever rounded.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import CurveError, InputError

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing floats and booleans."""
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"expected an exact rational, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise InputError(f"expected 'p/q' or an integer, got {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational: {value!r}") from None
    raise InputError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class PiecewiseLinearCurve:
    points: tuple[tuple[Fraction, Fraction], ...]
    left_slope: Fraction
    right_slope: Fraction

    def __post_init__(self):
        pts = tuple((as_rational(z), as_rational(u)) for z, u in self.points)
        if not pts:
            raise CurveError("curve needs at least one breakpoint")
        left, right = as_rational(self.left_slope), as_rational(self.right_slope)
        if left >= 0 or right >= 0:
            raise CurveError("curve is not strictly decreasing: tail slopes must be negative")
        for (z0, u0), (z1, u1) in zip(pts, pts[1:]):
            if z1 <= z0:
                raise CurveError("breakpoint payments must be strictly increasing")
            if u1 >= u0:
                raise CurveError("curve is not strictly decreasing between breakpoints")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "left_slope", left)
        object.__setattr__(self, "right_slope", right)

    @classmethod
    def quasilinear(cls, value: RationalLike) -> "PiecewiseLinearCurve":
        """The curve ``z -> value - z``."""
        return cls(((as_rational(value), Fraction(0)),), Fraction(-1), Fraction(-1))

    @property
    def payments(self) -> tuple[Fraction, ...]:
        return tuple(z for z, _ in self.points)

    @property
    def levels(self) -> tuple[Fraction, ...]:
        return tuple(u for _, u in self.points)

    def __call__(self, z: RationalLike) -> Fraction:
        return pwl_eval(self, z)

    def inverse(self, level: RationalLike) -> Fraction:
        return pwl_inverse(self, level)

    def shifted(self, offset: RationalLike) -> "PiecewiseLinearCurve":
        """Translate horizontally: the result at ``z + offset`` equals self at ``z``."""
        s = as_rational(offset)
        return PiecewiseLinearCurve(
            tuple((z + s, u) for z, u in self.points), self.left_slope, self.right_slope
        )

    def to_json(self) -> dict:
        return {
            "points": [[format_rational(z), format_rational(u)] for z, u in self.points],
            "left_slope": format_rational(self.left_slope),
            "right_slope": format_rational(self.right_slope),
        }


def pwl_eval(curve: PiecewiseLinearCurve, z: RationalLike) -> Fraction:
    z = as_rational(z)
    pts = curve.points
    z_first, u_first = pts[0]
    if z <= z_first:
        return u_first + curve.left_slope * (z - z_first)
    z_last, u_last = pts[-1]
    if z >= z_last:
        return u_last + curve.right_slope * (z - z_last)
    k = bisect_left(curve.payments, z)
    z1, u1 = pts[k]
    if z1 == z:
        return u1
    z0, u0 = pts[k - 1]
    return u0 + (u1 - u0) * (z - z0) / (z1 - z0)


def pwl_inverse(curve: PiecewiseLinearCurve, level: RationalLike) -> Fraction:
    """The unique payment at which ``curve`` reaches ``level``."""
    lam = as_rational(level)
    pts = curve.points
    z_first, u_first = pts[0]
    if lam >= u_first:
        return z_first + (lam - u_first) / curve.left_slope
    z_last, u_last = pts[-1]
    if lam <= u_last:
        return z_last + (lam - u_last) / curve.right_slope
    # levels are decreasing; search on their negation
    k = bisect_left([-u for u in curve.levels], -lam)
    z1, u1 = pts[k]
    if u1 == lam:
        return z1
    z0, u0 = pts[k - 1]
    return z0 + (z1 - z0) * (lam - u0) / (u1 - u0)


@dataclass(frozen=True)
class EverywhereConstant:
    difference: Fraction


@dataclass(frozen=True)
class ConstantFrom:
    level: Fraction
    difference: Fraction


@dataclass(frozen=True)
class NeverConstant:
    pass


AlignmentResult = Union[EverywhereConstant, ConstantFrom, NeverConstant]


def alignment_level(a: PiecewiseLinearCurve, b: PiecewiseLinearCurve) -> AlignmentResult:
    """Where ``a.inverse(l) - b.inverse(l)`` becomes constant as ``l`` decreases from +inf.

    High levels sit on the left tails, so unequal left slopes mean the
    difference is never eventually constant. Otherwise scan the merged level
    breakpoints downward; the difference is linear between neighbours, so
    equality at each breakpoint is enough.
    """
    if a.left_slope != b.left_slope:
        return NeverConstant()
    levels = sorted(set(a.levels) | set(b.levels), reverse=True)

    def diff(lam):
        return pwl_inverse(a, lam) - pwl_inverse(b, lam)

    d = diff(levels[0])
    lowest = levels[0]
    for lam in levels[1:]:
        if diff(lam) != d:
            return ConstantFrom(lowest, d)
        lowest = lam
    if a.right_slope == b.right_slope:
        return EverywhereConstant(d)
    return ConstantFrom(lowest, d)


@dataclass(frozen=True)
class MonotoneMap:
    """A strictly increasing piecewise-linear bijection of the rationals.

    Used to re-express a utility by an order-equivalent one.
    """

    points: tuple[tuple[Fraction, Fraction], ...]
    left_slope: Fraction
    right_slope: Fraction

    def __post_init__(self):
        # mirror image of a decreasing curve: x -> -phi(x) must be decreasing
        mirror = PiecewiseLinearCurve(
            tuple((x, -y) for x, y in self.points), -as_rational(self.left_slope),
            -as_rational(self.right_slope),
        )
        object.__setattr__(self, "points", tuple((x, -y) for x, y in mirror.points))
        object.__setattr__(self, "left_slope", -mirror.left_slope)
        object.__setattr__(self, "right_slope", -mirror.right_slope)
        object.__setattr__(self, "_mirror", mirror)

    def __call__(self, x: RationalLike) -> Fraction:
        return -pwl_eval(self._mirror, x)


def compose(phi: MonotoneMap, curve: PiecewiseLinearCurve) -> PiecewiseLinearCurve:
    """The curve ``z -> phi(curve(z))``; it induces the same ordering of payments."""
    zs = set(curve.payments)
    zs.update(pwl_inverse(curve, x) for x, _ in phi.points)
    pts = tuple((z, phi(pwl_eval(curve, z))) for z in sorted(zs))
    # the left tail of the curve climbs to +inf, i.e. into phi's right tail
    return PiecewiseLinearCurve(
        pts, phi.right_slope * curve.left_slope, phi.left_slope * curve.right_slope
    )


def curve_from_segments(
    points: Iterable[Sequence[RationalLike]], left_slope: RationalLike, right_slope: RationalLike
) -> PiecewiseLinearCurve:
    return PiecewiseLinearCurve(
        tuple((as_rational(z), as_rational(u)) for z, u in points),
        as_rational(left_slope),
        as_rational(right_slope),
    )
