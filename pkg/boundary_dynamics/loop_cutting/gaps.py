"""
Shortcut elements g(p, q) and the gap intervals they bound.

For a simple cusp arc λ(p, q), g(p, q) is the element carrying p to q whose
axis misses every lift of the arc and with g(q, p) g(p, q) = θ(p). Its
fixed points cut the circle into the gaps I⁺(p, q) = (q, a(p, q)) and
I⁻(p, q) = (b(q, p), q), both taken on the side away from p.
"""

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import List, Optional, Tuple

from ..errors import InvariantViolation, NotInDelta, SamePoint
from ..exact_geometry.moebius import compose, fixed_points
from ..exact_geometry.points import INF, compare, same_point
from ..exact_geometry.tools import (
    CircleInterval,
    Orientation,
    cyclic_order,
    intervals_disjoint,
)
from ..surface_model.surface import GroupElement, ParabolicPoint, SurfaceGroup, conjugacy_key
from ..surface_model.tools import parabolic_witness, theta
from .farey import geodesics_cross, self_intersection_count

logger = logging.getLogger(__name__)

# The six points p, a(q,p), b(q,p), q, a(p,q), b(p,q) run in this direction of C,
# and the foot g(p,q)^-1 p of the shortcut lies within one cusp width of q on
# the side it points to.
HOROCYCLE_ORIENTATION = Orientation.NEGATIVE


@dataclass(frozen=True)
class Gap:
    p: ParabolicPoint
    q: ParabolicPoint
    g_pq: GroupElement
    g_qp: GroupElement
    a_pq: object
    b_pq: object
    a_qp: object
    b_qp: object
    interval_plus: CircleInterval
    interval_minus: CircleInterval
    interval_full: CircleInterval

    def interval(self, epsilon: int) -> CircleInterval:
        return self.interval_plus if epsilon > 0 else self.interval_minus

    def element(self, epsilon: int) -> GroupElement:
        """The derived element for side epsilon: g(p,q) or g(q,p)^-1."""
        return self.g_pq if epsilon > 0 else self.g_qp.inverse()

    def width(self):
        return self.interval_full.width()

    @property
    def geodesic_key(self) -> str:
        return conjugacy_key(self.g_pq.word)


def element_power(surface: SurfaceGroup, element: GroupElement, n: int) -> GroupElement:
    base = element if n >= 0 else element.inverse()
    result = surface.identity()
    for _ in range(abs(n)):
        result = result.multiply(base)
    return result


def chart_shortcut(surface: SurfaceGroup, q: Fraction) -> GroupElement:
    """g(∞, q) for a rational q, assuming the arc [∞, q] projects to a simple arc."""
    witness = parabolic_witness(surface, q).witness
    foot = witness.inverse().apply(INF)
    width = surface.cusp_width
    if HOROCYCLE_ORIENTATION is Orientation.NEGATIVE:
        n = floor((foot - q) / width) + 1
    else:
        n = floor((foot - q) / width)
    return witness.multiply(element_power(surface, surface.theta_infinity, n))


def _check_axis(surface: SurfaceGroup, element: GroupElement, p, q, theta_p: GroupElement):
    attracting, repelling = fixed_points(element.matrix)
    target = q
    for k in (-1, 0, 1):
        shifted = element_power(surface, theta_p, k).apply(target)
        if geodesics_cross(attracting, repelling, p, shifted):
            raise InvariantViolation(f"axis of {element} crosses a lift of the arc to {q}")


def compute_g(surface: SurfaceGroup, p: ParabolicPoint, q: ParabolicPoint,
              check_simple: bool = True, depth: int = 4096) -> Tuple[GroupElement, GroupElement]:
    """
    Return (g(p, q), g(q, p)).

    Raises:
        SamePoint: p == q
        NotInDelta: the arc λ(p, q) is not simple
    """
    if same_point(p.point, q.point):
        raise SamePoint("g(p, p) is undefined")
    chart = p.witness
    q_chart = chart.inverse().apply(q.point)
    if check_simple:
        count = self_intersection_count(surface, INF, q_chart, depth=depth)
        if count:
            raise NotInDelta(f"arc from {p.point} to {q.point} has {count} self-intersections")
    g_pq = chart_shortcut(surface, q_chart).conjugate(chart)
    theta_p = theta(surface, p)
    g_qp = theta_p.multiply(g_pq.inverse())
    if g_pq.apply(p.point) != q.point:
        raise InvariantViolation(f"g(p,q) does not carry {p.point} to {q.point}")
    if compose(g_qp.matrix, g_pq.matrix) != theta_p.matrix:
        raise InvariantViolation("g(q,p) g(p,q) differs from θ(p)")
    _check_axis(surface, g_pq, p.point, q.point, theta_p)
    _check_axis(surface, g_qp, p.point, q.point, theta_p)
    return g_pq, g_qp


def build_gap(surface: SurfaceGroup, p: ParabolicPoint, g_pq: GroupElement, verify: bool = True) -> Gap:
    """The gap of the arc from p to g_pq(p), given its shortcut element."""
    q = ParabolicPoint(g_pq.apply(p.point), g_pq.multiply(p.witness))
    theta_p = theta(surface, p)
    g_qp = theta_p.multiply(g_pq.inverse())
    a_pq, b_pq = fixed_points(g_pq.matrix)
    a_qp, b_qp = fixed_points(g_qp.matrix)
    gap = Gap(
        p=p,
        q=q,
        g_pq=g_pq,
        g_qp=g_qp,
        a_pq=a_pq,
        b_pq=b_pq,
        a_qp=a_qp,
        b_qp=b_qp,
        interval_plus=CircleInterval.between(q.point, a_pq, p.point),
        interval_minus=CircleInterval.between(b_qp, q.point, p.point),
        interval_full=CircleInterval.between(b_qp, a_pq, p.point),
    )
    if verify:
        verify_gap(surface, gap, theta_p)
    return gap


def verify_gap(surface: SurfaceGroup, gap: Gap, theta_p: Optional[GroupElement] = None):
    """Check the composition identity, the six-point order and disjointness from translates."""
    theta_p = theta_p or theta(surface, gap.p)
    if compose(gap.g_qp.matrix, gap.g_pq.matrix) != theta_p.matrix:
        raise InvariantViolation("g(q,p) g(p,q) differs from θ(p)")
    six = [gap.p.point, gap.a_qp, gap.b_qp, gap.q.point, gap.a_pq, gap.b_pq]
    for i in range(1, 5):
        if cyclic_order(six[0], six[i], six[i + 1]) is not HOROCYCLE_ORIENTATION:
            raise InvariantViolation(f"six-point order fails at position {i} for the gap at {gap.q.point}")
    for n in (-3, -2, -1, 1, 2, 3):
        shifted = gap.interval_full.image(element_power(surface, theta_p, n).matrix)
        if not intervals_disjoint(gap.interval_full, shifted):
            raise InvariantViolation(f"gap at {gap.q.point} meets its θ^{n} translate")


def gap(surface: SurfaceGroup, p: ParabolicPoint, q: ParabolicPoint, depth: int = 4096) -> Gap:
    """The gap I(p, q), with every invariant checked. Raises NotInDelta for non-simple arcs."""
    g_pq, _ = compute_g(surface, p, q, depth=depth)
    return build_gap(surface, p, g_pq)


def reverse_gap(surface: SurfaceGroup, gap: Gap) -> Gap:
    """The gap of the same arc leaving p through its other end: g(p, q') = g(p,q)^-1 θ(p)."""
    theta_p = theta(surface, gap.p)
    return build_gap(surface, gap.p, gap.g_pq.inverse().multiply(theta_p))


def transport_gap(surface: SurfaceGroup, gap: Gap, h: GroupElement) -> Gap:
    """The image gap h·I(p, q) = I(hp, hq)."""
    p = ParabolicPoint(h.apply(gap.p.point), h.multiply(gap.p.witness))
    return build_gap(surface, p, gap.g_pq.conjugate(h), verify=False)


def period_normalize(surface: SurfaceGroup, g: GroupElement) -> GroupElement:
    """Conjugate g(∞, q) by a power of θ(∞) so that q lies in [0, c)."""
    q = g.apply(INF)
    k = -floor(q / surface.cusp_width)
    if k == 0:
        return g
    return g.conjugate(element_power(surface, surface.theta_infinity, k))


def enumerate_gaps(surface: SurfaceGroup, budget: int, p: Optional[ParabolicPoint] = None,
                   slack: int = 4) -> List[Gap]:
    """
    Every gap I(∞, q) with q in [0, c) whose g(∞, q) has word length <= budget.

    The search walks the orbit of the gap at q = 1 under the twist
    generators and arc reversal, shortest words first, never holding words
    longer than budget + slack. Gaps of another base point p are the
    transports of these by p's witness.
    """
    from ..topology.mapping_class import TWIST_GENERATORS, normalize_mapping_class

    twists = [
        normalize_mapping_class(images, TWIST_GENERATORS[name.swapcase()], surface.peripheral_word, name)
        for name, images in sorted(TWIST_GENERATORS.items())
    ]
    theta_inf = surface.theta_infinity
    seed = period_normalize(surface, chart_shortcut(surface, Fraction(1)))
    limit = budget + slack
    found = {seed.apply(INF): seed}
    heap = [(len(seed), seed.word, seed)]
    while heap:
        _, _, g = heapq.heappop(heap)
        successors = [period_normalize(surface, phi.apply_element(surface, g)) for phi in twists]
        successors.append(period_normalize(surface, g.inverse().multiply(theta_inf)))
        for successor in successors:
            q = successor.apply(INF)
            if q in found or len(successor) > limit:
                continue
            found[q] = successor
            heapq.heappush(heap, (len(successor), successor.word, successor))

    base = ParabolicPoint(INF, surface.identity())
    gaps = [build_gap(surface, base, g) for g in found.values() if len(g) <= budget]
    gaps.sort(key=_left_key)
    logger.info("enumerated %d gaps at budget %d", len(gaps), budget)
    if p is not None and p.point is not INF:
        gaps = [transport_gap(surface, item, p.witness) for item in gaps]
    return gaps


class _LeftKey:
    __slots__ = ("point",)

    def __init__(self, point):
        self.point = point

    def __lt__(self, other):
        return compare(self.point, other.point) < 0


def _left_key(item: Gap):
    return _LeftKey(item.interval_full.left)
