import random

import pytest

from boundary_dynamics.exact_geometry.points import INF
from boundary_dynamics.surface_model.surface import ParabolicPoint, modular_torus


@pytest.fixture(scope="session")
def surface():
    return modular_torus()


@pytest.fixture(scope="session")
def infinity(surface):
    return ParabolicPoint(INF, surface.identity())


@pytest.fixture
def rng():
    return random.Random(20240917)


def random_word(rng, length, letters="aAbB"):
    """A random reduced word of exactly the given length."""
    word = ""
    while len(word) < length:
        letter = rng.choice(letters)
        if word and word[-1] == letter.swapcase():
            continue
        word += letter
    return word
