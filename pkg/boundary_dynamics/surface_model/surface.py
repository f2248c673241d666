"""
The once-punctured surface as a Fuchsian group acting on C.

Group words are strings over the generator letters; a lowercase letter is
a generator and the matching uppercase letter its inverse. A word acts as
the left-to-right matrix product of its letters, so "ab" is the map
z -> a(b(z)).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from ..errors import InvariantViolation
from ..exact_geometry.moebius import MapType, MoebiusMap, apply, classify, compose
from ..exact_geometry.points import INF, compare
from ..exact_geometry.tools import CircleInterval, intervals_disjoint, interval_within

logger = logging.getLogger(__name__)


def invert_letter(letter: str) -> str:
    return letter.swapcase()


def invert_word(word: str) -> str:
    return "".join(invert_letter(letter) for letter in reversed(word))


def reduce_word(word: str) -> str:
    """Free reduction: cancel adjacent letter/inverse pairs."""
    stack = []
    for letter in word:
        if stack and stack[-1] == invert_letter(letter):
            stack.pop()
        else:
            stack.append(letter)
    return "".join(stack)


def is_reduced(word: str) -> bool:
    return all(word[i] != invert_letter(word[i + 1]) for i in range(len(word) - 1))


def cyclic_reduce(word: str) -> Tuple[str, str]:
    """
    Split a reduced word as w = u c u^-1 with c cyclically reduced.

    Returns:
        (u, c)
    """
    word = reduce_word(word)
    start, end = 0, len(word)
    while end - start >= 2 and word[start] == invert_letter(word[end - 1]):
        start += 1
        end -= 1
    return word[:start], word[start:end]


def conjugacy_key(word: str) -> str:
    """Canonical name of the unoriented conjugacy class of a word."""
    _, core = cyclic_reduce(word)
    if not core:
        return ""
    candidates = []
    for variant in (core, invert_word(core)):
        candidates.extend(variant[i:] + variant[:i] for i in range(len(variant)))
    return min(candidates, key=lambda w: (len(w), w))


@dataclass(frozen=True)
class GroupElement:
    word: str
    matrix: MoebiusMap

    def __len__(self):
        return len(self.word)

    def is_identity(self) -> bool:
        return self.word == ""

    def inverse(self) -> "GroupElement":
        return GroupElement(invert_word(self.word), self.matrix.inverse())

    def multiply(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(reduce_word(self.word + other.word), compose(self.matrix, other.matrix))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.multiply(other)

    def conjugate(self, by: "GroupElement") -> "GroupElement":
        """by * self * by^-1"""
        return by.multiply(self).multiply(by.inverse())

    def apply(self, x):
        return apply(self.matrix, x)

    def __str__(self):
        return self.word or "1"


@dataclass(frozen=True)
class ParabolicPoint:
    """A cusp point together with a group element carrying ∞ to it."""

    point: object
    witness: GroupElement

    def __eq__(self, other):
        if not isinstance(other, ParabolicPoint):
            return NotImplemented
        return self.point == other.point

    def __hash__(self):
        return hash(self.point)


@dataclass(frozen=True, eq=False)
class SurfaceGroup:
    """
    A free Fuchsian group with one cusp, normalized so the cusp sits at ∞.

    ping_pong maps every letter (generators and inverses) to an open
    circle interval; the letter carries the closed complement of its
    inverse's interval into the closure of its own.
    """

    name: str
    generators: Dict[str, MoebiusMap]
    peripheral_word: str
    cusp_width: Fraction
    euler_characteristic: int
    orientation_sign: int
    ping_pong: Dict[str, CircleInterval]
    base_point: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    modular_commutator: bool = False
    _letters: Dict[str, MoebiusMap] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        letters = {}
        for letter, matrix in self.generators.items():
            letters[letter] = matrix
            letters[invert_letter(letter)] = matrix.inverse()
        object.__setattr__(self, "_letters", letters)

    @property
    def letters(self):
        return sorted(self._letters)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def letter_matrix(self, letter: str) -> MoebiusMap:
        return self._letters[letter]

    def evaluate(self, word: str) -> MoebiusMap:
        result = MoebiusMap.identity()
        for letter in word:
            result = compose(result, self._letters[letter])
        return result

    def element(self, word: str) -> GroupElement:
        word = reduce_word(word)
        return GroupElement(word, self.evaluate(word))

    def identity(self) -> GroupElement:
        return GroupElement("", MoebiusMap.identity())

    @property
    def peripheral(self) -> GroupElement:
        return self.element(self.peripheral_word)

    @property
    def theta_infinity(self) -> GroupElement:
        """The generator of stab(∞) translating C∖{∞} in the positive direction."""
        peripheral = self.peripheral
        return peripheral if self.orientation_sign > 0 else peripheral.inverse()

    @property
    def cusp_point(self):
        return INF

    def validate(self) -> "SurfaceGroup":
        """Check every structural invariant; raise InvariantViolation on failure."""
        peripheral = self.evaluate(self.peripheral_word)
        if classify(peripheral) is not MapType.PARABOLIC or peripheral.c != 0:
            raise InvariantViolation(f"peripheral word {self.peripheral_word} does not fix ∞ parabolically")
        theta = self.theta_infinity.matrix
        shift = apply(theta, Fraction(0))
        if compare(shift, 0) <= 0:
            raise InvariantViolation("θ(∞) does not translate in the positive direction")
        if shift != self.cusp_width:
            raise InvariantViolation(f"θ(∞) translates by {shift}, expected {self.cusp_width}")
        if self.euler_characteristic >= 0:
            raise InvariantViolation("euler characteristic must be negative")
        self._check_ping_pong()
        return self

    def _check_ping_pong(self):
        letters = self.letters
        if set(self.ping_pong) != set(letters):
            raise InvariantViolation("ping-pong intervals must cover every letter")
        for i, first in enumerate(letters):
            for second in letters[i + 1:]:
                if not intervals_disjoint(self.ping_pong[first], self.ping_pong[second]):
                    raise InvariantViolation(f"ping-pong intervals of {first} and {second} overlap")
        for letter in letters:
            source = self.ping_pong[invert_letter(letter)]
            image = CircleInterval(
                apply(self._letters[letter], source.right), apply(self._letters[letter], source.left)
            )
            if not interval_within(image, self.ping_pong[letter]):
                raise InvariantViolation(f"letter {letter} does not play ping-pong")
        logger.debug("ping-pong verified for %s", self.name)


def modular_torus() -> SurfaceGroup:
    """
    The modular punctured torus: the commutator subgroup of PSL(2, Z).

    Built from A = [[1,1],[1,2]], B = [[1,-1],[-1,2]] conjugated by
    S = [[0,-1],[1,0]], which moves the cusp of the commutator from 0 to ∞.
    """
    conjugator = MoebiusMap(0, -1, 1, 0)
    a = compose(compose(conjugator, MoebiusMap(1, 1, 1, 2)), conjugator.inverse())
    b = compose(compose(conjugator, MoebiusMap(1, -1, -1, 2)), conjugator.inverse())
    surface = SurfaceGroup(
        name="modular torus",
        generators={"a": a, "b": b},
        peripheral_word="abAB",
        cusp_width=Fraction(6),
        euler_characteristic=-1,
        # abAB acts as z -> z - 6, so θ(∞) is its inverse
        orientation_sign=-1,
        ping_pong={
            "a": CircleInterval(INF, Fraction(-1)),
            "A": CircleInterval(Fraction(0), Fraction(1)),
            "b": CircleInterval(Fraction(1), INF),
            "B": CircleInterval(Fraction(-1), Fraction(0)),
        },
        modular_commutator=True,
    )
    return surface.validate()


def surface_from_settings(config_path: Optional[str] = None) -> SurfaceGroup:
    """The configured surface, or the modular torus when no config file is given."""
    if not config_path:
        return modular_torus()
    from .config import load_surface

    return load_surface(config_path)
