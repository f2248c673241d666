from fractions import Fraction

import pytest

from boundary_dynamics.errors import ConfigError, NotRational, SurfaceConfigError, UnsupportedSurface
from boundary_dynamics.exact_geometry.moebius import MapType, MoebiusMap, classify, compose
from boundary_dynamics.exact_geometry.points import INF, parse_point
from boundary_dynamics.settings import Settings, load_settings
from boundary_dynamics.surface_model.config import parse_surface
from boundary_dynamics.surface_model.surface import (
    conjugacy_key,
    cyclic_reduce,
    invert_word,
    reduce_word,
)
from boundary_dynamics.surface_model.tools import (
    contains,
    modular_character,
    parabolic_point,
    theta,
    unimodular_completion,
)

from conftest import random_word

MODULAR_TORUS_CONFIG = """
# the commutator subgroup of PSL(2, Z)
name = modular torus
generator a = 2 -1 -1 1
generator b = 2 1 1 1
peripheral = abAB
orientation = -1
cusp_width = 6
euler_characteristic = -1
interval a = inf -1
interval A = 0 1
interval b = 1 inf
interval B = -1 0
"""


def test_word_helpers():
    assert invert_word("abAB") == "baBA"
    assert reduce_word("abBAa") == "a"
    assert cyclic_reduce("abA") == ("a", "b")
    assert conjugacy_key("abAB") == "ABab"
    assert conjugacy_key("bABa") == conjugacy_key("baBA") == "ABab"
    assert conjugacy_key("aAbB") == ""


def test_modular_torus_structure(surface):
    assert surface.generators["a"] == MoebiusMap(2, -1, -1, 1)
    assert surface.generators["b"] == MoebiusMap(2, 1, 1, 1)
    assert surface.peripheral.matrix == MoebiusMap(1, -6, 0, 1)
    assert surface.theta_infinity.word == "baBA"
    assert surface.theta_infinity.matrix == MoebiusMap(1, 6, 0, 1)
    assert surface.euler_characteristic == -1
    assert surface.cusp_width == 6


def test_modular_character():
    assert modular_character(MoebiusMap(1, 1, 0, 1)) == 1
    assert modular_character(MoebiusMap(0, -1, 1, 0)) == 3
    assert modular_character(MoebiusMap(2, -1, -1, 1)) == 0
    assert modular_character(MoebiusMap(1, 6, 0, 1)) == 0


def test_contains_generators_and_non_members(surface):
    assert contains(surface, surface.generators["a"]).word == "a"
    assert contains(surface, MoebiusMap(1, 1, 0, 1)) is None
    assert contains(surface, MoebiusMap(0, -1, 1, 0)) is None
    assert contains(surface, MoebiusMap.identity()).word == ""


def test_contains_recovers_random_words(surface, rng):
    for _ in range(1000):
        word = random_word(rng, rng.randint(1, 9))
        element = contains(surface, surface.evaluate(word))
        assert element is not None
        assert element.word == word


def test_unimodular_completion():
    for numerator, denominator in [(0, 1), (22, 7), (-5, 3), (1, 1)]:
        m = unimodular_completion(numerator, denominator)
        assert m.a * m.d - m.b * m.c == 1
        assert m(INF) == Fraction(numerator, denominator)


def test_parabolic_witnesses(surface, rng):
    points = [Fraction(0), Fraction(22, 7), Fraction(-3, 2)]
    points += [Fraction(rng.randint(-50, 50), rng.randint(1, 30)) for _ in range(200)]
    for x in points:
        p = parabolic_point(surface, x)
        assert p.witness.apply(INF) == x
        assert surface.evaluate(p.witness.word) == p.witness.matrix
    assert parabolic_point(surface, INF).witness.is_identity()


def test_parabolic_witness_rejects_irrationals(surface):
    with pytest.raises(NotRational):
        parabolic_point(surface, parse_point("(1+1*sqrt(5))/2"))


def test_theta_fixes_its_cusp(surface):
    for x in [Fraction(0), Fraction(1), Fraction(7, 5), Fraction(-22, 7)]:
        p = parabolic_point(surface, x)
        stabilizer = theta(surface, p)
        assert classify(stabilizer.matrix) is MapType.PARABOLIC
        assert stabilizer.apply(x) == x


def test_theta_is_equivariant(surface, rng):
    for _ in range(30):
        g = surface.element(random_word(rng, rng.randint(1, 5)))
        p = parabolic_point(surface, Fraction(rng.randint(-20, 20), rng.randint(1, 9)))
        moved = parabolic_point(surface, g.apply(p.point))
        expected = compose(compose(g.matrix, theta(surface, p).matrix), g.matrix.inverse())
        assert theta(surface, moved).matrix == expected


def test_parse_surface_matches_builtin(surface):
    parsed = parse_surface(MODULAR_TORUS_CONFIG)
    assert parsed.generators == surface.generators
    assert parsed.theta_infinity.matrix == surface.theta_infinity.matrix
    assert parsed.modular_commutator


def test_parse_surface_reports_line_numbers():
    broken = MODULAR_TORUS_CONFIG.replace("generator b = 2 1 1 1", "generator b = 1 1 1 1")
    with pytest.raises(SurfaceConfigError) as info:
        parse_surface(broken)
    assert info.value.line_number == 5

    with pytest.raises(SurfaceConfigError):
        parse_surface(MODULAR_TORUS_CONFIG + "colour = blue\n")


def test_parse_surface_rejects_wrong_topology():
    with pytest.raises(UnsupportedSurface):
        parse_surface(MODULAR_TORUS_CONFIG.replace("euler_characteristic = -1", "euler_characteristic = -2"))


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("BOUNDARY_GAP_BUDGET", "5")
    monkeypatch.setenv("BOUNDARY_LOG_LEVEL", "debug")
    settings = load_settings()
    assert settings.gap_budget == 5
    assert settings.log_level == "DEBUG"
    assert settings.with_overrides(gap_budget=None, seed=3).gap_budget == 5
    assert settings.with_overrides(seed=3).seed == 3


def test_settings_reject_bad_values(monkeypatch):
    monkeypatch.setenv("BOUNDARY_MAX_STEPS", "many")
    with pytest.raises(ConfigError):
        load_settings()
    monkeypatch.setenv("BOUNDARY_MAX_STEPS", "-1")
    with pytest.raises(ConfigError):
        load_settings()


def test_settings_defaults():
    assert Settings().cutting_depth == 4096
