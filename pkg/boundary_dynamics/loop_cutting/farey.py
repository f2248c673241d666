"""
Cutting sequences through the Farey tessellation and crossings of cusp arcs.

Every geodesic between two cusp points of the modular torus passes through
finitely many ideal triangles of the Farey tessellation. Whenever a translate
h L' crosses L, the crossing point sits in a triangle of L whose preimage
under h is a triangle of L'; so the crossing translates are found among the
maps between the two triangle lists.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import List, Tuple

from ..errors import DepthExceeded, InvariantViolation, SamePoint, UnsupportedSurface
from ..exact_geometry.moebius import MoebiusMap, apply, compose
from ..exact_geometry.points import INF, compare, same_point
from ..exact_geometry.tools import Orientation, cyclic_order
from ..surface_model.surface import SurfaceGroup, invert_letter
from ..surface_model.tools import unimodular_completion, modular_character

logger = logging.getLogger(__name__)

Triangle = Tuple[object, object, object]


class Oracle(Enum):
    CUTTING_SEQUENCE = "cutting-sequence"
    BOUNDED_WORD_SEARCH = "bounded-word-search"


def _vector(x) -> Tuple[int, int]:
    if x is INF:
        return 1, 0
    x = Fraction(x)
    return x.numerator, x.denominator


def triangle_frame(triangle: Triangle) -> MoebiusMap:
    """The map carrying (∞, 0, 1) to a positively ordered Farey triangle."""
    (p1, q1), (p2, q2) = _vector(triangle[0]), _vector(triangle[1])
    det = p1 * q2 - p2 * q1
    if det == -1:
        p2, q2 = -p2, -q2
    elif det != 1:
        raise ValueError(f"{triangle} is not a Farey triangle")
    frame = MoebiusMap(p1, p2, q1, q2)
    if apply(frame, Fraction(1)) != triangle[2]:
        raise ValueError(f"{triangle} is not positively ordered")
    return frame


def rotations(triangle: Triangle) -> List[Triangle]:
    a, b, c = triangle
    return [(a, b, c), (b, c, a), (c, a, b)]


def _ordered(u, v, w) -> Triangle:
    if cyclic_order(u, v, w) is Orientation.POSITIVE:
        return u, v, w
    return u, w, v


def chart_cutting_sequence(x: Fraction, depth: int = 4096) -> List[Triangle]:
    """
    Farey triangles met by the vertical geodesic [∞, x].

    For an integer x the geodesic is itself a Farey edge and the two
    triangles on either side are returned.
    """
    x = Fraction(x)
    if x.denominator == 1:
        n = x.numerator
        return [(INF, Fraction(n - 1), Fraction(n)), (INF, Fraction(n), Fraction(n + 1))]
    n = x.numerator // x.denominator
    lo, hi = Fraction(n), Fraction(n + 1)
    triangles = [(INF, lo, hi)]
    while True:
        mediant = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
        triangles.append((lo, mediant, hi))
        if len(triangles) > depth:
            raise DepthExceeded(f"cutting sequence of [inf, {x}] is longer than {depth}")
        if mediant == x:
            return triangles
        if x < mediant:
            hi = mediant
        else:
            lo = mediant


def normalizing_map(u) -> MoebiusMap:
    """A modular map carrying ∞ to the cusp point u."""
    if u is INF:
        return MoebiusMap.identity()
    u = Fraction(u)
    return unimodular_completion(u.numerator, u.denominator)


def cutting_sequence(u, v, depth: int = 4096) -> List[Triangle]:
    """Farey triangles met by the geodesic [u, v] between two cusp points."""
    if same_point(u, v):
        raise SamePoint("a geodesic needs distinct endpoints")
    frame = normalizing_map(u)
    chart = chart_cutting_sequence(apply(frame.inverse(), v), depth)
    return [_ordered(*(apply(frame, vertex) for vertex in triangle)) for triangle in chart]


def geodesics_cross(u1, v1, u2, v2) -> bool:
    """Whether [u1, v1] and [u2, v2] cross transversally in the interior of H."""
    first = cyclic_order(u1, u2, v1)
    second = cyclic_order(u1, v2, v1)
    if Orientation.DEGENERATE in (first, second):
        return False
    return first is not second


def _require_modular(surface: SurfaceGroup):
    if not surface.modular_commutator:
        raise UnsupportedSurface("cutting sequences need the modular torus group")


def crossing_translates(surface: SurfaceGroup, arc, other, depth: int = 4096) -> List[MoebiusMap]:
    """
    All h in the group with h(other) crossing arc transversally.

    arc and other are pairs of cusp points. When they are the same geodesic
    the identity is excluded automatically since it does not cross.
    """
    _require_modular(surface)
    targets = cutting_sequence(arc[0], arc[1], depth)
    sources = cutting_sequence(other[0], other[1], depth)
    target_frames = [triangle_frame(rotated) for triangle in targets for rotated in rotations(triangle)]
    source_inverses = [triangle_frame(triangle).inverse() for triangle in sources]
    seen = set()
    found = []
    for frame, inverse in product(target_frames, source_inverses):
        h = compose(frame, inverse)
        if h in seen:
            continue
        seen.add(h)
        if h.is_identity() or modular_character(h) != 0:
            continue
        if geodesics_cross(arc[0], arc[1], apply(h, other[0]), apply(h, other[1])):
            found.append(h)
    logger.debug("%d crossing translates from %d x %d triangles", len(found), len(targets), len(sources))
    return sorted(found, key=lambda m: (abs(m.a) + abs(m.b) + abs(m.c) + abs(m.d), m.a, m.b, m.c, m.d))


@dataclass(frozen=True)
class ChartCrossing:
    """
    A crossing of the chart arc [∞, x] with a translate h[∞, x'].

    height_squared is the squared height of the crossing on [∞, x];
    partner_height_squared is the squared height of its preimage under h
    on [∞, x'].
    """

    element: MoebiusMap
    height_squared: Fraction
    partner_height_squared: Fraction


def chart_crossings(surface: SurfaceGroup, x: Fraction, other: Fraction, depth: int = 4096) -> List[ChartCrossing]:
    """Crossings of [∞, x] with translates of [∞, other], with the heights of both lifts."""
    x, other = Fraction(x), Fraction(other)
    crossings = []
    for h in crossing_translates(surface, (INF, x), (INF, other), depth):
        start, end = apply(h, INF), apply(h, other)
        height_squared = (x - start) * (end - x)
        inverse = h.inverse()
        scale = (inverse.c * x + inverse.d) ** 2 + inverse.c ** 2 * height_squared
        crossings.append(ChartCrossing(h, height_squared, height_squared / (scale * scale)))
    return crossings


def self_intersection_count(surface: SurfaceGroup, p, q, oracle: Oracle = Oracle.CUTTING_SEQUENCE,
                            word_bound: int = 6, depth: int = 4096) -> int:
    """
    Number of self-crossings of the projected arc between cusp points p and q.

    Each self-crossing lifts to the pair h, h^-1 of translates crossing [p, q].
    The bounded word search only sees translates of length <= word_bound and
    is a lower bound.
    """
    p = getattr(p, "point", p)
    q = getattr(q, "point", q)
    if oracle is Oracle.CUTTING_SEQUENCE:
        translates = crossing_translates(surface, (p, q), (p, q), depth)
    else:
        translates = [
            element.matrix
            for element in _reduced_words(surface, word_bound)
            if geodesics_cross(p, q, apply(element.matrix, p), apply(element.matrix, q))
        ]
    if len(translates) % 2:
        raise InvariantViolation("crossing translates do not pair up with their inverses")
    return len(translates) // 2


def _reduced_words(surface: SurfaceGroup, bound: int):
    frontier = [surface.identity()]
    for _ in range(bound):
        successors = []
        for element in frontier:
            for letter in surface.letters:
                if element.word and element.word[-1] == invert_letter(letter):
                    continue
                successors.append(element.multiply(surface.element(letter)))
        yield from successors
        frontier = successors


def arc_crossing_count(surface: SurfaceGroup, arc, other, depth: int = 4096) -> int:
    """Geometric intersection number of two distinct simple cusp arcs."""
    return len(crossing_translates(surface, arc, other, depth))


def floor_point(x) -> int:
    """Exact floor of a finite exact point."""
    guess = int(float(x))
    while compare(x, guess) < 0:
        guess -= 1
    while compare(x, guess + 1) >= 0:
        guess += 1
    return guess
