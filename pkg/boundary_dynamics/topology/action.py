"""
The boundary action of mapping classes.

A normalized class fixes the cusp ∞ and acts on a cusp point h∞ as
φ(h)∞. Elsewhere it carries the derived sequences of x to those of φx:
the elements become φ(g_i), the cusps φ(p_i) and the signs flip exactly
when φ reverses orientation. Rebuilding the gaps of that image sequence
traps φx in an interval.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import InsufficientDepth, InvariantViolation, UnresolvedPrecision
from ..exact_geometry.points import INF, IntervalReal, rational_bounds
from ..exact_geometry.tools import CircleInterval, Membership, interior_point, interval_contains
from ..loop_cutting.expansion import Terminal, agreement_neighborhood, derived_expansion, intersect_around
from ..loop_cutting.gaps import Gap, build_gap
from ..surface_model.surface import GroupElement, ParabolicPoint, SurfaceGroup
from ..surface_model.tools import parabolic_witness, theta
from .mapping_class import MappingClass

logger = logging.getLogger(__name__)


def apply_to_cusp(surface: SurfaceGroup, phi: MappingClass, x) -> object:
    """φ on a cusp point, exactly, through the word of its witness."""
    if x is INF:
        return INF
    witness = parabolic_witness(surface, x).witness
    return phi.apply_element(surface, witness).apply(INF)


def image_gaps(surface: SurfaceGroup, phi: MappingClass, steps: Sequence[Tuple[GroupElement, int]],
               base: Optional[ParabolicPoint] = None) -> List[Tuple[Gap, int]]:
    """The gaps I^{ε'}(φp_{i-1}, φp_i) of the image of a derived sequence given as (g_i, ε_i) pairs."""
    current = ParabolicPoint(INF, surface.identity())
    if base is not None and base.point is not INF:
        image_witness = phi.apply_element(surface, base.witness)
        current = ParabolicPoint(image_witness.apply(INF), image_witness)
    gaps = []
    for g, epsilon in steps:
        image = phi.apply_element(surface, g)
        sign = epsilon * phi.orientation
        if sign > 0:
            shortcut = image
        else:
            # φ(g_i) = g(q', p')^-1, and g(p', q') = g(q', p')^-1 θ(p')
            shortcut = image.multiply(theta(surface, current))
        built = build_gap(surface, current, shortcut)
        gaps.append((built, sign))
        current = built.q
    return gaps


def image_neighborhood(surface: SurfaceGroup, phi: MappingClass, steps: Sequence[Tuple[GroupElement, int]],
                       neighborhood: CircleInterval, base: Optional[ParabolicPoint] = None,
                       precision: int = 50) -> CircleInterval:
    """
    φ applied to the agreement neighborhood of a derived sequence prefix.

    The image is the component, around the image of a rational inside the
    neighborhood, of the intersection of the rebuilt gap intervals.
    """
    anchor = apply_to_cusp(surface, phi, interior_point(neighborhood, precision))
    gaps = image_gaps(surface, phi, steps, base)
    result = gaps[0][0].interval(gaps[0][1])
    for built, sign in gaps[1:]:
        result = intersect_around(result, built.interval(sign), anchor)
    return result


def _check_routes(surface: SurfaceGroup, phi: MappingClass, x: Fraction, exact, depth: int, precision: int,
                  expansion_options: dict):
    """The word route's φx must lie in the gaps rebuilt from the image of x's derived sequence."""
    expansion = derived_expansion(surface, x, max_steps=depth, **expansion_options)
    if not expansion.steps:
        return
    neighborhood = agreement_neighborhood(expansion, len(expansion.steps))
    steps = [(step.g, step.epsilon) for step in expansion.steps]
    image = image_neighborhood(surface, phi, steps, neighborhood, expansion.base, precision)
    if interval_contains(image, exact) is not Membership.YES:
        raise InvariantViolation(f"word route sends {x} to {exact}, outside the expansion route's {image}")


def _enclose(surface: SurfaceGroup, phi: MappingClass, x, depth: int, precision: int,
             expansion_options: dict) -> Tuple[Fraction, Fraction, bool]:
    """Rational bounds on φx from the first `depth` expansion steps, and whether more steps exist."""
    expansion = derived_expansion(surface, x, max_steps=depth, **expansion_options)
    n = len(expansion.steps)
    if n == 0:
        raise InsufficientDepth(f"expansion of {x} has no steps")
    neighborhood = agreement_neighborhood(expansion, n)
    steps = [(step.g, step.epsilon) for step in expansion.steps]
    image = image_neighborhood(surface, phi, steps, neighborhood, expansion.base, precision)
    if image.left is INF or image.right is INF or image.contains_infinity():
        raise InsufficientDepth(f"image of {x} after {n} steps is unbounded in the chart")
    lo, _ = rational_bounds(image.left, precision)
    _, hi = rational_bounds(image.right, precision)
    logger.debug("φ(%s) enclosed after %d steps", x, n)
    return lo, hi, expansion.terminal is Terminal.EXHAUSTED


def apply_mapping_class(surface: SurfaceGroup, phi: MappingClass, x, depth: int = 24,
                        tolerance: Optional[Fraction] = None, precision: int = 50, max_depth: Optional[int] = None,
                        **expansion_options):
    """
    φx for a boundary point x.

    Cusp points map exactly through the word of their witness, and that
    answer is checked against the gaps of the image derived sequence.
    Any other point comes back as an IntervalReal enclosing φx. The
    expansion is deepened, doubling up to max_depth (4·depth by default),
    until the enclosure is no wider than tolerance; its refine callback
    doubles the depth again.

    Raises:
        InsufficientDepth: the enclosure did not shrink below tolerance
        InvariantViolation: the two routes disagree on a cusp point
    """
    if x is INF:
        return INF
    if phi.is_identity_automorphism():
        return x
    if isinstance(x, (int, Fraction)):
        exact = apply_to_cusp(surface, phi, x)
        _check_routes(surface, phi, Fraction(x), exact, depth, precision, expansion_options)
        return exact

    max_depth = max_depth or 4 * depth
    current = depth
    while True:
        lo, hi, deeper = _enclose(surface, phi, x, current, precision, expansion_options)
        if tolerance is None or hi - lo <= tolerance:
            break
        if not deeper or current >= max_depth:
            raise InsufficientDepth(
                f"enclosure of φ({x}) has width {float(hi - lo):.3g} after {current} steps, wanted {float(tolerance):.3g}"
            )
        current = min(2 * current, max_depth)

    def refine() -> IntervalReal:
        tighter = apply_mapping_class(surface, phi, x, 2 * current, None, precision, None, **expansion_options)
        if tighter.width >= hi - lo:
            raise UnresolvedPrecision(f"expanding {x} to {2 * current} steps did not tighten φ({x})")
        return tighter

    return IntervalReal(lo, hi, refine if deeper else None)
