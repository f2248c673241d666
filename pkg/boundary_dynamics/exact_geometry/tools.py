"""
Circle-order predicates and open circle intervals.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath

from ..errors import UnresolvedPrecision
from .moebius import MoebiusMap, apply
from .points import INF, IntervalReal, compare, format_point, mpf_to_fraction, same_point, subtract, to_mpf


class Orientation(Enum):
    POSITIVE = 1
    NEGATIVE = -1
    DEGENERATE = 0

    def reversed(self) -> "Orientation":
        return Orientation(-self.value)


class Membership(Enum):
    YES = "yes"
    NO = "no"
    UNRESOLVED = "unresolved"


def cyclic_order(x, y, z) -> Orientation:
    """
    Orientation of the triple (x, y, z) on C = R ∪ {∞}.

    POSITIVE iff y lies on the open arc running from x to z in the direction
    of increasing real coordinate (passing through ∞ after +∞).
    """
    if same_point(x, y) or same_point(y, z) or same_point(x, z):
        return Orientation.DEGENERATE
    if x is INF:
        positive = compare(y, z) < 0
    elif z is INF:
        positive = compare(x, y) < 0
    elif y is INF:
        positive = compare(z, x) < 0
    else:
        xy, yz, xz = compare(x, y) < 0, compare(y, z) < 0, compare(x, z) < 0
        # increasing up to rotation: x<y<z, y<z<x or z<x<y
        positive = (xy and yz) or (yz and not xz) or (not xz and xy)
    return Orientation.POSITIVE if positive else Orientation.NEGATIVE


@dataclass(frozen=True)
class CircleInterval:
    """The open arc from left to right in the positive direction."""

    left: object
    right: object

    def __post_init__(self):
        if same_point(self.left, self.right):
            raise ValueError("circle interval needs distinct endpoints")

    @classmethod
    def between(cls, x, y, avoiding) -> "CircleInterval":
        """The arc with endpoints x, y that does not contain the point avoiding."""
        if cyclic_order(x, avoiding, y) is Orientation.POSITIVE:
            return cls(y, x)
        return cls(x, y)

    def image(self, m: MoebiusMap) -> "CircleInterval":
        return CircleInterval(apply(m, self.left), apply(m, self.right))

    def complement(self) -> "CircleInterval":
        return CircleInterval(self.right, self.left)

    def contains_infinity(self) -> bool:
        return self.right is not INF and self.left is not INF and compare(self.left, self.right) > 0

    def width(self):
        """Euclidean length of a finite real interval, exact within one quadratic field."""
        if self.left is INF or self.right is INF or self.contains_infinity():
            raise ValueError(f"{self} is unbounded in the real chart")
        return subtract(self.right, self.left)

    def __str__(self):
        return f"({format_point(self.left)}, {format_point(self.right)})"


def _contains(interval: CircleInterval, x) -> bool:
    return cyclic_order(interval.left, x, interval.right) is Orientation.POSITIVE


def interval_contains(interval: CircleInterval, x, refinements: int = 0) -> Membership:
    """
    Exact membership in an open circle interval.

    An IntervalReal x is refined up to `refinements` times before the
    answer is reported as UNRESOLVED.
    """
    for _ in range(refinements + 1):
        try:
            return Membership.YES if _contains(interval, x) else Membership.NO
        except UnresolvedPrecision:
            if not isinstance(x, IntervalReal) or x.refine is None:
                break
            try:
                x = x.refined()
            except UnresolvedPrecision:
                break
    return Membership.UNRESOLVED


def _in_closed_arc(start, x, end) -> bool:
    return same_point(x, start) or same_point(x, end) or cyclic_order(start, x, end) is Orientation.POSITIVE


def intervals_disjoint(first: CircleInterval, second: CircleInterval) -> bool:
    """Whether two open arcs share no point."""
    start, end = first.right, first.left
    if not (_in_closed_arc(start, second.left, end) and _in_closed_arc(start, second.right, end)):
        return False
    if same_point(second.left, start) or same_point(second.right, end):
        return True
    if same_point(second.left, end) or same_point(second.right, start):
        return False
    return cyclic_order(start, second.left, second.right) is Orientation.POSITIVE


def interval_within(inner: CircleInterval, outer: CircleInterval) -> bool:
    """Whether the open arc inner is contained in the open arc outer."""
    return intervals_disjoint(inner, outer.complement())


def interior_point(interval: CircleInterval, precision: int = 50) -> Fraction:
    """An exact rational strictly inside the open arc."""
    left, right = interval.left, interval.right
    if left is INF:
        candidate = Fraction(math.floor(float(right)) - 1)
    elif right is INF or interval.contains_infinity():
        candidate = Fraction(math.ceil(float(left)) + 1)
    else:
        with mpmath.workdps(precision):
            candidate = mpf_to_fraction((to_mpf(left) + to_mpf(right)) / 2)
    if not _contains(interval, candidate):
        raise UnresolvedPrecision(f"no interior point of {interval} found at {precision} digits")
    return candidate
