"""Exact arithmetic for angles between 0 and pi and for their multiset sums.

An angle is the direction of a primitive integer vector ``(x, y)`` with
``y > 0``; its measure is the argument of ``x + iy``, which is strictly
between 0 and pi.  Summing angles multiplies the vectors as Gaussian
integers while counting wrap-arounds past a full turn, so sums and
comparisons of arbitrary finite multisets of angles stay in integer
arithmetic throughout: no floats, no trigonometric evaluation, no rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable

__all__ = [
    "AngleLit",
    "AngleOverflow",
    "AngleSum",
    "DegenerateAngle",
    "Ordering",
    "PlaneVector",
    "add_two",
    "angle_from_rays",
    "angle_from_slope_vector",
    "compare_args",
    "compare_multisets",
    "right_angle",
    "sum_multiset",
]


class DegenerateAngle(ValueError):
    """The requested direction has measure 0 or pi, which no angle has."""


class AngleOverflow(ValueError):
    """Two angles were composed into a measure of pi or more."""


class Ordering(Enum):
    """Exhaustive three-way comparison result."""

    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@dataclass(frozen=True)
class AngleLit:
    """A canonical angle: primitive vector with ``y > 0``, argument in (0, pi).

    ``x`` may be negative (obtuse angles) or zero (the right angle); the
    invariants ``y > 0`` and ``gcd(|x|, y) = 1`` make representations unique,
    so two AngleLits denote the same angle exactly when they are equal.
    """

    x: int
    y: int

    def __post_init__(self) -> None:
        if self.y <= 0:
            raise DegenerateAngle(
                f"angle vector ({self.x}, {self.y}) must point strictly above the x-axis"
            )
        if gcd(abs(self.x), self.y) != 1:
            raise ValueError(f"angle vector ({self.x}, {self.y}) is not reduced")

    def __str__(self) -> str:
        return f"ang({self.x}/{self.y})"


@dataclass(frozen=True)
class PlaneVector:
    """Nonzero primitive integer vector; its argument lives in [0, 2*pi)."""

    x: int
    y: int

    def __post_init__(self) -> None:
        if self.x == 0 and self.y == 0:
            raise ValueError("zero vector has no direction")
        if gcd(abs(self.x), abs(self.y)) != 1:
            raise ValueError(f"vector ({self.x}, {self.y}) is not reduced")

    def __str__(self) -> str:
        return f"({self.x},{self.y})"


@dataclass(frozen=True)
class AngleSum:
    """Total measure of a multiset of angles.

    The measure is ``2*pi*windings`` plus the argument of ``rep``.  The empty
    multiset sums to zero turns with representative (1, 0).
    """

    windings: int
    rep: PlaneVector

    def __post_init__(self) -> None:
        if self.windings < 0:
            raise ValueError("winding count cannot be negative")

    def __str__(self) -> str:
        return f"turns={self.windings}, rep=({self.rep.x},{self.rep.y})"


def _reduced(x: int, y: int) -> PlaneVector:
    g = gcd(abs(x), abs(y))
    if g == 0:
        raise ValueError("zero vector has no direction")
    return PlaneVector(x // g, y // g)


def angle_from_slope_vector(x: int, y: int) -> AngleLit:
    """Canonical angle whose measure is the argument of the vector ``(x, y)``.

    Raises DegenerateAngle unless ``y > 0``, i.e. unless the argument is
    strictly between 0 and pi.
    """
    if y <= 0:
        raise DegenerateAngle(f"vector ({x}, {y}) does not point strictly above the x-axis")
    g = gcd(abs(x), y)
    return AngleLit(x // g, y // g)


def right_angle() -> AngleLit:
    """The angle between perpendicular rays, canonically (0, 1)."""
    return AngleLit(0, 1)


def angle_from_rays(apex, p, q) -> AngleLit:
    """Angle at ``apex`` between the rays toward ``p`` and ``q``.

    Points are pairs of integers or :class:`~fractions.Fraction`.  Only the
    dot and cross products of the two ray vectors are used; both scale by
    the same positive factor, so no square roots are involved and the result
    is exact.  Collinear rays (inclination 0 or pi) raise DegenerateAngle.
    """
    ux = Fraction(p[0]) - Fraction(apex[0])
    uy = Fraction(p[1]) - Fraction(apex[1])
    vx = Fraction(q[0]) - Fraction(apex[0])
    vy = Fraction(q[1]) - Fraction(apex[1])
    dot = ux * vx + uy * vy
    cross = ux * vy - uy * vx
    if cross == 0:
        raise DegenerateAngle("rays are collinear: the inclination is 0 or pi")
    scale = lcm(dot.denominator, cross.denominator)
    return angle_from_slope_vector(int(dot * scale), int(abs(cross) * scale))


def _direction_rank(v: PlaneVector) -> int:
    # Counterclockwise from the positive x-axis: even ranks are the four
    # axes, odd ranks the four open quadrants.
    if v.y == 0:
        return 0 if v.x > 0 else 4
    if v.x == 0:
        return 2 if v.y > 0 else 6
    if v.y > 0:
        return 1 if v.x > 0 else 3
    return 5 if v.x < 0 else 7


def compare_args(a: PlaneVector, b: PlaneVector) -> Ordering:
    """Order two directions exactly by argument in [0, 2*pi).

    Different ranks (axis / open quadrant, counterclockwise) decide
    immediately; within one open quadrant the sign of the cross product
    decides; an axis rank holds a single primitive vector, so equal axis
    ranks mean equal directions.
    """
    ra, rb = _direction_rank(a), _direction_rank(b)
    if ra != rb:
        return Ordering.LESS if ra < rb else Ordering.GREATER
    if ra % 2 == 0:
        return Ordering.EQUAL
    cross = a.x * b.y - a.y * b.x
    if cross > 0:
        return Ordering.LESS
    if cross < 0:
        return Ordering.GREATER
    return Ordering.EQUAL


_UNIT = PlaneVector(1, 0)


def sum_multiset(angles: Iterable[AngleLit]) -> AngleSum:
    """Total measure of a finite multiset of angles.

    Folds Gaussian-integer multiplication over the elements, reducing by the
    gcd after every step to bound coordinate growth.  Each element
    contributes an argument in (0, pi), so the accumulated argument wraps
    past a full turn exactly when it decreases; each wrap bumps the winding
    count.  The result does not depend on the iteration order.
    """
    windings = 0
    acc = _UNIT
    for a in angles:
        composed = _reduced(acc.x * a.x - acc.y * a.y, acc.x * a.y + acc.y * a.x)
        if compare_args(composed, acc) is Ordering.LESS:
            windings += 1
        acc = composed
    return AngleSum(windings, acc)


def compare_multisets(a: Iterable[AngleLit], b: Iterable[AngleLit]) -> Ordering:
    """Exact total order on finite multisets of angles, by total measure.

    Orders lexicographically by (winding count, argument of the
    representative); Equal means the winding counts agree and the canonical
    representatives are identical.
    """
    sa, sb = sum_multiset(a), sum_multiset(b)
    if sa.windings != sb.windings:
        return Ordering.LESS if sa.windings < sb.windings else Ordering.GREATER
    return compare_args(sa.rep, sb.rep)


def add_two(b: AngleLit, c: AngleLit) -> AngleLit:
    """The single angle measuring arg(b) + arg(c); inverse of splitting.

    Defined only when the combined measure stays strictly below pi; since
    each operand is below pi the composed vector points into the upper
    half-plane exactly in that case, so ``y <= 0`` raises AngleOverflow.
    """
    x = b.x * c.x - b.y * c.y
    y = b.x * c.y + b.y * c.x
    if y <= 0:
        raise AngleOverflow(f"{b} + {c} measures at least pi")
    g = gcd(abs(x), y)
    return AngleLit(x // g, y // g)
