"""
Locating a boundary point among the gaps of a cusp.

A rational point whose ray from ∞ is not simple returns to itself; the
highest crossing whose partner lies further up the ray marks the first
self-return, and the translate through it starts at the cusp q whose gap
contains the point. Every answer is re-verified by exact membership, with
a scan over enumerated gaps as fallback.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from ..errors import SamePoint, UnresolvedPrecision
from ..exact_geometry.moebius import apply
from ..exact_geometry.points import INF, IntervalReal, Surd, same_point
from ..exact_geometry.tools import Membership, interval_contains
from ..surface_model.surface import GroupElement, ParabolicPoint, SurfaceGroup
from .farey import chart_crossings, floor_point, self_intersection_count
from .gaps import Gap, build_gap, chart_shortcut, element_power, enumerate_gaps, transport_gap

logger = logging.getLogger(__name__)


class Outcome(Enum):
    IN_GAP = "in-gap"
    IN_R = "in-R"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Classification:
    outcome: Outcome
    epsilon: int = 0
    gap: Optional[Gap] = None
    budget: int = 0

    @property
    def q(self) -> Optional[ParabolicPoint]:
        return self.gap.q if self.gap else None

    @property
    def g(self) -> Optional[GroupElement]:
        return self.gap.element(self.epsilon) if self.gap else None


def side_of(gap: Gap, x, refinements: int = 0) -> Optional[int]:
    """+1 or -1 when x lies in I⁺ or I⁻ of the gap, None otherwise."""
    if interval_contains(gap.interval_plus, x, refinements) is Membership.YES:
        return 1
    if interval_contains(gap.interval_minus, x, refinements) is Membership.YES:
        return -1
    return None


def _scan(surface: SurfaceGroup, x, budget: int, slack: int) -> Optional[Gap]:
    """Search the enumerated gaps and their θ(∞) translates for one containing x."""
    width = surface.cusp_width
    k = int(floor_point(x) // width)
    for level in (budget, budget + slack, budget + 2 * slack):
        for item in enumerate_gaps(surface, level, slack=slack):
            for shift in (k - 1, k, k + 1):
                moved = x - shift * width
                if interval_contains(item.interval_full, moved) is Membership.YES:
                    return transport_gap(surface, item, element_power(surface, surface.theta_infinity, shift))
    return None


@lru_cache(maxsize=4096)
def _classify_rational(surface: SurfaceGroup, x: Fraction, budget: int, slack: int, depth: int) -> Classification:
    crossings = chart_crossings(surface, x, x, depth)
    if not crossings:
        return Classification(Outcome.IN_R, budget=budget)
    returning = [c for c in crossings if c.partner_height_squared > c.height_squared]
    base = ParabolicPoint(INF, surface.identity())
    if returning:
        first = max(returning, key=lambda c: (c.height_squared, -abs(c.element.c)))
        q = apply(first.element, INF)
        if self_intersection_count(surface, INF, q, depth=depth) == 0:
            candidate = build_gap(surface, base, chart_shortcut(surface, q))
            epsilon = side_of(candidate, x)
            if epsilon is not None:
                return Classification(Outcome.IN_GAP, epsilon, candidate, budget)
        logger.debug("first self-return of %s did not locate its gap; scanning", x)
    found = _scan(surface, x, budget, slack)
    if found is None:
        return Classification(Outcome.UNRESOLVED, budget=budget)
    epsilon = side_of(found, x)
    return Classification(Outcome.IN_GAP, epsilon, found, budget)


def _convergents(x, count: int):
    """Continued-fraction convergents of a finite exact irrational."""
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    remainder = x
    for _ in range(count):
        digit = floor_point(remainder)
        h_prev, h = h, digit * h + h_prev
        k_prev, k = k, digit * k + k_prev
        yield Fraction(h, k)
        remainder = remainder - digit
        if not isinstance(remainder, Surd):
            return
        remainder = 1 / remainder


def classify_chart(surface: SurfaceGroup, x, budget: int = 12, convergents: int = 24,
                   slack: int = 4, depth: int = 4096, refinements: int = 8) -> Classification:
    """Classify x relative to the cusp at ∞."""
    if x is INF:
        raise SamePoint("the point coincides with the cusp")
    if isinstance(x, (int, Fraction)):
        return _classify_rational(surface, Fraction(x), budget, slack, depth)

    if isinstance(x, Surd):
        for approximation in _convergents(x, convergents):
            result = _classify_rational(surface, approximation, budget, slack, depth)
            if result.outcome is not Outcome.IN_GAP:
                continue
            found = result.gap
            if same_point(x, found.a_pq) or same_point(x, found.b_qp):
                return Classification(Outcome.IN_R, budget=budget)
            epsilon = side_of(found, x)
            if epsilon is not None:
                return Classification(Outcome.IN_GAP, epsilon, found, budget)
        return Classification(Outcome.UNRESOLVED, budget=budget)

    enclosure: IntervalReal = x
    for _ in range(refinements + 1):
        result = _classify_rational(surface, enclosure.midpoint, budget, slack, depth)
        if result.outcome is Outcome.IN_GAP:
            epsilon = side_of(result.gap, enclosure)
            if epsilon is not None:
                return Classification(Outcome.IN_GAP, epsilon, result.gap, budget)
        if enclosure.refine is None:
            break
        enclosure = enclosure.refined()
    return Classification(Outcome.UNRESOLVED, budget=budget)


def classify_point(surface: SurfaceGroup, p: ParabolicPoint, x, budget: int = 12, convergents: int = 24,
                   slack: int = 4, depth: int = 4096) -> Classification:
    """
    Locate x among the gaps I^ε(p, q).

    Returns IN_GAP with ε and the gap, IN_R when x is a cusp point with a
    simple ray or a gap endpoint, and UNRESOLVED when no gap was found
    within the budget (always the case for irrational points of R(p)).

    Raises:
        SamePoint: x == p
    """
    if x is not INF and not isinstance(x, IntervalReal) and p.point is not INF and same_point(x, p.point):
        raise SamePoint("the point coincides with the base cusp")
    if x is INF and p.point is INF:
        raise SamePoint("the point coincides with the base cusp")
    try:
        local = p.witness.inverse().apply(x)
    except UnresolvedPrecision:
        return Classification(Outcome.UNRESOLVED, budget=budget)
    result = classify_chart(surface, local, budget, convergents, slack, depth)
    if result.outcome is not Outcome.IN_GAP or p.point is INF:
        return result
    return Classification(Outcome.IN_GAP, result.epsilon, transport_gap(surface, result.gap, p.witness), budget)
