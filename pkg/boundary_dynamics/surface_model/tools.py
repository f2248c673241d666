"""
Word problem, cusp witnesses and cusp stabilizers for a SurfaceGroup.
"""

import logging
from collections import deque
from fractions import Fraction
from typing import Optional, Tuple

from ..errors import InvariantViolation, NotRational, WitnessSearchExhausted
from ..exact_geometry.moebius import MoebiusMap, apply, compose
from ..exact_geometry.points import INF, compare
from .surface import GroupElement, ParabolicPoint, SurfaceGroup, invert_letter

logger = logging.getLogger(__name__)

TRANSLATION = MoebiusMap(1, 1, 0, 1)


def modular_character(m: MoebiusMap) -> int:
    """
    Image of m under the abelianization PSL(2, Z) -> Z/6.

    The translation z -> z + 1 maps to 1 and z -> -1/z maps to 3; the
    modular torus group is the kernel.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    value = 0
    while c != 0:
        n = a // c
        # peel off T^n, then the inversion S
        a, b = a - n * c, b - n * d
        value += n
        a, b, c, d = c, d, -a, -b
        value += 3
    # what remains is ±[[1, t], [0, 1]]
    value += b * a
    return value % 6


def _orbit_point(m: MoebiusMap, x0: Fraction, y0_squared: Fraction) -> Tuple[Fraction, Fraction]:
    """Real part and squared imaginary part of m(x0 + i*y0)."""
    shift = m.c * x0 + m.d
    denominator = shift * shift + m.c * m.c * y0_squared
    real = ((m.a * x0 + m.b) * shift + m.a * m.c * y0_squared) / denominator
    return real, y0_squared / (denominator * denominator)


def _in_region(interval, real: Fraction, y_squared: Fraction) -> bool:
    """Whether the point lies in the half-plane bounded by the geodesic over interval."""
    left, right = interval.left, interval.right
    if left is INF:
        return real < right
    if right is INF:
        return real > left
    center = (left + right) / 2
    radius = (right - left) / 2
    inside = (real - center) ** 2 + y_squared < radius * radius
    return inside if compare(left, right) < 0 else (real - center) ** 2 + y_squared > radius * radius


def contains(surface: SurfaceGroup, g: MoebiusMap) -> Optional[GroupElement]:
    """
    Decide whether g lies in the surface group.

    Returns:
        the element with its unique reduced word, or None when g is not a member
    """
    if surface.modular_commutator and modular_character(g) != 0:
        return None
    x0, y0_squared = surface.base_point
    budget = 8 + 4 * max(abs(g.a), abs(g.b), abs(g.c), abs(g.d))
    word = []
    current = g
    while not current.is_identity():
        if len(word) > budget:
            logger.debug("ping-pong descent for %s exceeded %d letters", g, budget)
            return None
        real, y_squared = _orbit_point(current, x0, y0_squared)
        letter = next(
            (letter for letter in surface.letters if _in_region(surface.ping_pong[letter], real, y_squared)),
            None,
        )
        if letter is None or (word and word[-1] == invert_letter(letter)):
            return None
        word.append(letter)
        current = compose(surface.letter_matrix(invert_letter(letter)), current)
    element = GroupElement("".join(word), g)
    if surface.evaluate(element.word) != g:
        raise InvariantViolation(f"descent word {element.word} does not evaluate to {g}")
    return element


def unimodular_completion(numerator: int, denominator: int) -> MoebiusMap:
    """A matrix [[r, u], [s, v]] of determinant 1 carrying ∞ to r/s."""
    old_r, r = numerator, denominator
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r != 0:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_u, u = u, old_u - quotient * u
        old_v, v = v, old_v - quotient * v
    # old_u * numerator + old_v * denominator = gcd = ±1
    if old_r < 0:
        old_u, old_v = -old_u, -old_v
    return MoebiusMap(numerator, -old_v, denominator, old_u)


def parabolic_witness(surface: SurfaceGroup, x, search_budget: int = 12) -> ParabolicPoint:
    """
    A group element carrying the cusp ∞ to the rational point x.

    Raises:
        NotRational: x is not Rational or ∞
        WitnessSearchExhausted: a non-arithmetic surface and no witness up to search_budget letters
    """
    if x is INF:
        return ParabolicPoint(INF, surface.identity())
    if not isinstance(x, (int, Fraction)):
        raise NotRational(f"{x} is not a parabolic point")
    x = Fraction(x)
    if surface.modular_commutator:
        base = unimodular_completion(x.numerator, x.denominator)
        shift = (-modular_character(base)) % 6
        candidates = []
        for n in (shift - 6, shift):
            element = contains(surface, compose(base, TRANSLATION ** n))
            if element is None:
                raise InvariantViolation(f"corrected witness for {x} left the group")
            candidates.append(element)
        witness = min(candidates, key=len)
        return ParabolicPoint(x, witness)
    return _search_witness(surface, x, search_budget)


def _search_witness(surface: SurfaceGroup, x: Fraction, budget: int) -> ParabolicPoint:
    queue = deque([surface.identity()])
    while queue:
        element = queue.popleft()
        if apply(element.matrix, INF) == x:
            return ParabolicPoint(x, element)
        if len(element) >= budget:
            continue
        for letter in surface.letters:
            if element.word and element.word[-1] == invert_letter(letter):
                continue
            queue.append(element.multiply(surface.element(letter)))
    raise WitnessSearchExhausted(f"no word of length <= {budget} carries ∞ to {x}")


def parabolic_point(surface: SurfaceGroup, x) -> ParabolicPoint:
    return parabolic_witness(surface, x)


def theta(surface: SurfaceGroup, p: ParabolicPoint) -> GroupElement:
    """The positive generator of the stabilizer of p."""
    result = surface.theta_infinity.conjugate(p.witness)
    chart = p.witness.inverse()
    normalized = compose(compose(chart.matrix, result.matrix), p.witness.matrix)
    if normalized.c != 0 or compare(apply(normalized, Fraction(0)), 0) <= 0:
        raise InvariantViolation(f"θ({p.point}) is not a positive translation in its chart")
    return result
