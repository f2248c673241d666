"""
Mapping classes of the punctured torus as automorphisms of the free group <a, b>.

A class is stored by the images of the generators, post-composed with an
inner automorphism so that the peripheral word abAB is sent exactly to
itself (orientation +1) or to its inverse (orientation -1).
"""

import logging
from collections import deque
from dataclasses import dataclass
from math import floor
from typing import Dict, List, Optional, Tuple

from ..errors import NotAnAutomorphism, PeripheralNotPreserved, UnsupportedSurface
from ..exact_geometry.moebius import MoebiusMap, apply, compose
from ..exact_geometry.points import INF
from ..surface_model.surface import GroupElement, SurfaceGroup, cyclic_reduce, invert_word, reduce_word

logger = logging.getLogger(__name__)

GENERATORS = ("a", "b")

# Nielsen twist maps; each fixes abAB letter for letter after free reduction
TWIST_GENERATORS: Dict[str, Dict[str, str]] = {
    "t": {"a": "a", "b": "ba"},
    "T": {"a": "a", "b": "bA"},
    "s": {"a": "ab", "b": "b"},
    "S": {"a": "aB", "b": "b"},
}

REFLECTION = {"a": "A", "b": "b"}


def substitute(images: Dict[str, str], word: str) -> str:
    """Image of a word under the endomorphism given on generators."""
    pieces = []
    for letter in word:
        image = images[letter.lower()]
        pieces.append(image if letter.islower() else invert_word(image))
    return reduce_word("".join(pieces))


def nielsen_inverse(images: Dict[str, str]) -> Dict[str, str]:
    """
    Invert an automorphism of <a, b> by greedy Nielsen reduction.

    Raises:
        NotAnAutomorphism: the images do not reduce to a basis of single letters
    """
    u, v = reduce_word(images["a"]), reduce_word(images["b"])
    # formal words U, V with phi(U) = u and phi(V) = v
    formal_u, formal_v = "a", "b"
    while len(u) + len(v) > 2:
        moves = [
            (reduce_word(u + v), v, reduce_word(formal_u + formal_v), formal_v),
            (reduce_word(u + invert_word(v)), v, reduce_word(formal_u + invert_word(formal_v)), formal_v),
            (reduce_word(v + u), v, reduce_word(formal_v + formal_u), formal_v),
            (reduce_word(invert_word(v) + u), v, reduce_word(invert_word(formal_v) + formal_u), formal_v),
            (u, reduce_word(v + u), formal_u, reduce_word(formal_v + formal_u)),
            (u, reduce_word(v + invert_word(u)), formal_u, reduce_word(formal_v + invert_word(formal_u))),
            (u, reduce_word(u + v), formal_u, reduce_word(formal_u + formal_v)),
            (u, reduce_word(invert_word(u) + v), formal_u, reduce_word(invert_word(formal_u) + formal_v)),
        ]
        best = min(moves, key=lambda move: len(move[0]) + len(move[1]))
        if len(best[0]) + len(best[1]) >= len(u) + len(v):
            raise NotAnAutomorphism(f"a -> {images['a']}, b -> {images['b']} is not invertible")
        u, v, formal_u, formal_v = best
    if len(u) != 1 or len(v) != 1 or u.lower() == v.lower():
        raise NotAnAutomorphism(f"a -> {images['a']}, b -> {images['b']} is not invertible")
    inverse = {}
    for image, formal in ((u, formal_u), (v, formal_v)):
        inverse[image.lower()] = formal if image.islower() else invert_word(formal)
    return inverse


def _composes_to_identity(images: Dict[str, str], inverse: Dict[str, str]) -> bool:
    return all(substitute(images, inverse[letter]) == letter for letter in GENERATORS)


@dataclass(frozen=True)
class MappingClass:
    images: Tuple[str, str]
    inverse_images: Tuple[str, str]
    orientation: int
    normalized: bool = True
    name: str = ""

    def image_map(self) -> Dict[str, str]:
        return dict(zip(GENERATORS, self.images))

    def inverse_map(self) -> Dict[str, str]:
        return dict(zip(GENERATORS, self.inverse_images))

    def image_word(self, word: str) -> str:
        return substitute(self.image_map(), word)

    def apply_element(self, surface: SurfaceGroup, element: GroupElement) -> GroupElement:
        return surface.element(self.image_word(element.word))

    def inverse(self) -> "MappingClass":
        return MappingClass(self.inverse_images, self.images, self.orientation, self.normalized, f"({self.name})^-1")

    def compose(self, other: "MappingClass") -> "MappingClass":
        """self after other."""
        images = tuple(self.image_word(word) for word in other.images)
        inverse = tuple(other.image_word_inverse(word) for word in self.inverse_images)
        return MappingClass(images, inverse, self.orientation * other.orientation,
                            self.normalized and other.normalized, self.name + other.name)

    def image_word_inverse(self, word: str) -> str:
        return substitute(self.inverse_map(), word)

    def is_identity_automorphism(self) -> bool:
        return self.images == GENERATORS

    def __str__(self):
        return f"{self.name or 'phi'}: a -> {self.images[0]}, b -> {self.images[1]}"


def identity_class() -> MappingClass:
    return MappingClass(GENERATORS, GENERATORS, 1, True, "")


def normalize_mapping_class(images: Dict[str, str], inverse_images: Optional[Dict[str, str]] = None,
                            peripheral_word: str = "abAB", name: str = "") -> MappingClass:
    """
    Normalize raw generator images so the peripheral word is fixed exactly.

    Raises:
        NotAnAutomorphism, PeripheralNotPreserved
    """
    if set(images) != set(GENERATORS):
        raise UnsupportedSurface("mapping classes are implemented for the rank-2 free group")
    images = {letter: reduce_word(word) for letter, word in images.items()}
    if inverse_images is None:
        inverse_images = nielsen_inverse(images)
    elif not _composes_to_identity(images, inverse_images):
        raise NotAnAutomorphism("supplied inverse does not compose to the identity")

    image = substitute(images, peripheral_word)
    prefix, core = cyclic_reduce(image)
    orientation, conjugator = None, None
    for sign, target in ((1, peripheral_word), (-1, invert_word(peripheral_word))):
        for i in range(len(target)):
            if core == target[i:] + target[:i]:
                orientation = sign
                # core = target[i:] target target[i:]^-1
                conjugator = reduce_word(prefix + target[i:]) if i else prefix
                break
        if orientation is not None:
            break
    if orientation is None:
        raise PeripheralNotPreserved(f"{image} is not conjugate to {peripheral_word} or its inverse")

    back = invert_word(conjugator)
    normalized = {letter: reduce_word(back + word + conjugator) for letter, word in images.items()}
    pulled = substitute(inverse_images, conjugator)
    inverse = {letter: reduce_word(pulled + word + invert_word(pulled)) for letter, word in inverse_images.items()}
    expected = peripheral_word if orientation > 0 else invert_word(peripheral_word)
    if substitute(normalized, peripheral_word) != expected:
        raise PeripheralNotPreserved("normalization failed to fix the peripheral word")
    return MappingClass(
        tuple(normalized[letter] for letter in GENERATORS),
        tuple(inverse[letter] for letter in GENERATORS),
        orientation,
        True,
        name,
    )


def twist_class(twist_word: str, peripheral_word: str = "abAB") -> MappingClass:
    """The composite of twist generators named by a word over t, T, s, S."""
    result = identity_class()
    for letter in twist_word:
        generator = TWIST_GENERATORS[letter]
        inverse = TWIST_GENERATORS[letter.swapcase()]
        result = result.compose(normalize_mapping_class(generator, inverse, peripheral_word, letter))
    return result


def reflection_class(peripheral_word: str = "abAB") -> MappingClass:
    return normalize_mapping_class(REFLECTION, REFLECTION, peripheral_word, "r")


def _theta_conjugate(theta: MoebiusMap, m: MoebiusMap, k: int) -> MoebiusMap:
    power = theta ** k
    return compose(compose(power, m), power.inverse())


def peripheral_shift(surface: SurfaceGroup, phi: MappingClass) -> Optional[int]:
    """
    The k with phi = conjugation by θ(∞)^k, or None when phi is not of that form.

    Such classes are trivial in the mapping class group and act on the
    chart as the translation by k times the cusp width.
    """
    if phi.orientation != 1:
        return None
    theta = surface.theta_infinity.matrix
    base = surface.evaluate("a")
    image = surface.evaluate(phi.images[0])
    ratio = (apply(image, INF) - apply(base, INF)) / surface.cusp_width
    if ratio.denominator != 1:
        return None
    k = int(ratio)
    for letter, word in zip(GENERATORS, phi.images):
        if surface.evaluate(word) != _theta_conjugate(theta, surface.evaluate(letter), k):
            return None
    return k


def is_trivial(surface: SurfaceGroup, phi: MappingClass) -> bool:
    return peripheral_shift(surface, phi) is not None


def class_key(surface: SurfaceGroup, phi: MappingClass) -> Tuple:
    """Identifies classes that differ by conjugation with a power of θ(∞)."""
    theta = surface.theta_infinity.matrix
    matrices = [surface.evaluate(word) for word in phi.images]
    offset = (apply(matrices[0], INF) - apply(surface.evaluate("a"), INF)) / surface.cusp_width
    k = -floor(offset)
    return (phi.orientation,) + tuple(_theta_conjugate(theta, m, k) for m in matrices)


def enumerate_mapping_classes(surface: SurfaceGroup, bound: int) -> List[MappingClass]:
    """
    Nontrivial classes reachable by twist words of length <= bound.

    Breadth-first over reduced twist words; classes equal up to the peripheral
    stabilizer are reported once, by their shortest twist word.
    """
    if not surface.modular_commutator:
        raise UnsupportedSurface("twist enumeration is implemented for the punctured torus")
    seen = {class_key(surface, identity_class())}
    found = []
    queue = deque([("", identity_class())])
    while queue:
        word, phi = queue.popleft()
        if len(word) >= bound:
            continue
        for letter in sorted(TWIST_GENERATORS):
            if word and word[-1] == letter.swapcase():
                continue
            step = normalize_mapping_class(TWIST_GENERATORS[letter], TWIST_GENERATORS[letter.swapcase()],
                                           surface.peripheral_word, letter)
            successor = phi.compose(step)
            key = class_key(surface, successor)
            if key in seen:
                continue
            seen.add(key)
            queue.append((word + letter, successor))
            if not is_trivial(surface, successor):
                found.append(successor)
    logger.info("%d mapping classes up to twist length %d", len(found), bound)
    return found
