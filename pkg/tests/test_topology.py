import json
from fractions import Fraction

import pytest

from boundary_dynamics.errors import DisjointnessFailure, InsufficientDepth, NotAnAutomorphism, NotFillingWithinDepth
from boundary_dynamics.exact_geometry.points import INF, IntervalReal, compare, format_point, parse_point
from boundary_dynamics.loop_cutting.classify import Outcome, classify_point
from boundary_dynamics.loop_cutting.expansion import derived_expansion
from boundary_dynamics.loop_cutting.farey import arc_crossing_count
from boundary_dynamics.loop_cutting.gaps import gap
from boundary_dynamics.surface_model.tools import parabolic_point
from boundary_dynamics.topology.action import apply_mapping_class, apply_to_cusp
from boundary_dynamics.topology.arcs import ArcSystem, CuspArc, arc_crossings, filling_report, is_filling
from boundary_dynamics.topology.mapping_class import (
    MappingClass,
    enumerate_mapping_classes,
    identity_class,
    is_trivial,
    normalize_mapping_class,
    peripheral_shift,
    reflection_class,
    twist_class,
)
from boundary_dynamics.topology.wandering import (
    certificate_record,
    check_classes,
    filling_density,
    read_certificate,
    verify_certificate_record,
    wandering_certificate,
)

ROOT_THREE = "(0+1*sqrt(3))/1"


def shift_class(surface):
    """Conjugation by θ(∞): trivial as a mapping class, a translation on the chart."""
    theta = surface.theta_infinity

    def conjugate(element, by):
        return by.multiply(element).multiply(by.inverse()).word

    images = tuple(conjugate(surface.element(letter), theta) for letter in "ab")
    inverse_images = tuple(conjugate(surface.element(letter), theta.inverse()) for letter in "ab")
    return MappingClass(images, inverse_images, 1, True, "shift")


def arc_to(surface, infinity, q):
    return CuspArc(infinity, parabolic_point(surface, Fraction(q)))


def test_single_arc_does_not_fill(surface, infinity):
    system = ArcSystem(surface, [arc_to(surface, infinity, 1)])
    result = is_filling(system)
    assert not result
    assert (result.census.vertices, result.census.edges, result.census.faces) == (1, 1, 2)
    assert result.witness_face


def test_ideal_triangulation_fills(surface, infinity):
    system = ArcSystem(surface, [arc_to(surface, infinity, q) for q in (0, 1, 2)])
    assert [system.crossing_count(i, j) for i in range(3) for j in range(3)] == [0] * 9
    result = is_filling(system)
    assert result.filling
    assert (result.census.vertices, result.census.edges, result.census.faces) == (1, 3, 2)
    assert result.census.euler == 0
    report = filling_report(system)
    assert report["filling"] is True
    assert len(report["arcs"]) == 3


def test_arc_system_drops_repeated_arcs(surface, infinity):
    arcs = [arc_to(surface, infinity, 1), arc_to(surface, infinity, 7), arc_to(surface, infinity, 2)]
    system = ArcSystem(surface, arcs)
    assert len(system.arcs) == 2


def test_normalize_twists_and_reflection():
    identity = normalize_mapping_class({"a": "a", "b": "b"})
    assert identity.is_identity_automorphism()
    assert identity.orientation == 1

    t = twist_class("t")
    assert t.images == ("a", "ba")
    assert t.orientation == 1
    assert t.image_word("abAB") == "abAB"

    r = reflection_class()
    assert r.orientation == -1
    assert r.image_word("abAB") == "baBA"


def test_normalize_rejects_non_automorphisms():
    with pytest.raises(NotAnAutomorphism):
        normalize_mapping_class({"a": "aa", "b": "b"})


def test_compose_with_inverse_is_identity():
    for word in ["t", "ts", "tSt", "sTs"]:
        phi = twist_class(word)
        assert phi.compose(phi.inverse()).is_identity_automorphism()
        assert phi.inverse().compose(phi).is_identity_automorphism()


def test_enumerated_classes_are_nontrivial(surface):
    classes = enumerate_mapping_classes(surface, 2)
    assert classes
    for phi in classes:
        assert not is_trivial(surface, phi)
    assert is_trivial(surface, identity_class())


def test_peripheral_shift_class(surface):
    shift = shift_class(surface)
    assert peripheral_shift(surface, shift) == 1
    assert peripheral_shift(surface, twist_class("t")) is None
    for x in [Fraction(0), Fraction(4, 5), Fraction(-22, 7)]:
        assert apply_to_cusp(surface, shift, x) == x + 6
    assert apply_to_cusp(surface, shift, INF) is INF


def test_identity_fixes_every_point(surface):
    x = parse_point(ROOT_THREE)
    assert apply_mapping_class(surface, identity_class(), x) is x
    assert apply_to_cusp(surface, identity_class(), Fraction(9, 14)) == Fraction(9, 14)


def test_action_on_cusps_composes(surface):
    t, s = twist_class("t"), twist_class("s")
    for x in [Fraction(4, 5), Fraction(7, 5), Fraction(-3, 2)]:
        assert apply_to_cusp(surface, t.compose(s), x) == apply_to_cusp(surface, t, apply_to_cusp(surface, s, x))


def test_derived_sequences_are_equivariant(surface):
    for phi in [twist_class("t"), twist_class("s"), reflection_class()]:
        for x in [Fraction(4, 5), Fraction(6, 5)]:
            expansion = derived_expansion(surface, x)
            image = derived_expansion(surface, apply_to_cusp(surface, phi, x))
            assert image.words == [phi.image_word(word) for word in expansion.words]
            assert image.signs == [sign * phi.orientation for sign in expansion.signs]


def test_remainder_is_preserved(surface, infinity):
    assert classify_point(surface, infinity, Fraction(3)).outcome is Outcome.IN_R
    moved = apply_to_cusp(surface, twist_class("t"), Fraction(3))
    assert classify_point(surface, infinity, moved).outcome is Outcome.IN_R


def test_apply_mapping_class_to_an_irrational(surface):
    x = parse_point(ROOT_THREE)
    enclosure = apply_mapping_class(surface, shift_class(surface), x, depth=3)
    assert isinstance(enclosure, IntervalReal)
    assert compare(enclosure.lo, x + 6) < 0 < compare(enclosure.hi, x + 6)


def test_apply_mapping_class_to_cusps_agrees_with_witness_words(surface):
    for phi in [twist_class("t"), twist_class("S"), reflection_class()]:
        for x in [Fraction(4, 5), Fraction(7, 5), Fraction(3)]:
            assert apply_mapping_class(surface, phi, x) == apply_to_cusp(surface, phi, x)


def test_irrational_images_refine(surface):
    x = parse_point(ROOT_THREE)
    enclosure = apply_mapping_class(surface, shift_class(surface), x, depth=3)
    assert enclosure.refine is not None
    tighter = enclosure.refined()
    assert tighter.width < enclosure.width
    assert compare(tighter.lo, x + 6) < 0 < compare(tighter.hi, x + 6)


def test_unreachable_tolerance_needs_more_depth(surface):
    x = parse_point(ROOT_THREE)
    with pytest.raises(InsufficientDepth):
        apply_mapping_class(surface, shift_class(surface), x, depth=2, tolerance=Fraction(1, 10 ** 40), max_depth=4)


def test_wander_rejects_rationals(surface):
    with pytest.raises(NotFillingWithinDepth):
        wandering_certificate(surface, Fraction(4, 5), depth=8, bound=1)


def test_wandering_certificate_for_a_quadratic_point(surface):
    x = parse_point("(1+1*sqrt(13))/3")
    certificate = wandering_certificate(surface, x, depth=8, bound=2)
    assert certificate.n == 2
    assert certificate.census.connected
    assert all(verdict.disjoint for verdict in certificate.verdicts)
    assert len(certificate.verdicts) == len(enumerate_mapping_classes(surface, 2))
    record = certificate_record(certificate)
    assert record["n"] == 2 and len(record["steps"]) == 2
    assert verify_certificate_record(surface, json.loads(json.dumps(record)))


def test_check_classes(surface, infinity):
    first = gap(surface, infinity, parabolic_point(surface, Fraction(1)))
    neighborhood = first.interval_plus
    steps = [(surface.element("A"), 1)]

    verdicts = check_classes(surface, steps, neighborhood, [shift_class(surface)])
    assert verdicts[0].disjoint
    assert verdicts[0].image.right == 7

    with pytest.raises(DisjointnessFailure) as info:
        check_classes(surface, steps, neighborhood, [twist_class("t")])
    assert info.value.mapping_class.images == ("a", "ba")


def _class_entry(phi):
    return {
        "name": phi.name,
        "images": list(phi.images),
        "inverse_images": list(phi.inverse_images),
        "orientation": phi.orientation,
    }


def test_certificate_record_verification(surface, infinity, tmp_path):
    first = gap(surface, infinity, parabolic_point(surface, Fraction(1)))
    neighborhood = first.interval_plus
    record = {
        "x": "4/5",
        "n": 1,
        "steps": [{"word": "A", "epsilon": 1}],
        "neighborhood": [format_point(neighborhood.left), format_point(neighborhood.right)],
        "classes": [_class_entry(shift_class(surface))],
    }
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(record))
    loaded = read_certificate(path)
    assert verify_certificate_record(surface, loaded)

    loaded["classes"].append(_class_entry(twist_class("t")))
    assert not verify_certificate_record(surface, loaded)

    loaded["classes"].pop()
    loaded["neighborhood"][1] = "2/1"
    assert not verify_certificate_record(surface, loaded)


def test_rationals_have_zero_filling_density(surface):
    report = filling_density(surface, [Fraction(4, 5), Fraction(6, 5), Fraction(3)], depth=8)
    assert report["samples"] == 3
    assert report["filling"] == 0
    assert report["fraction"] == 0.0
    assert report["prefixes"] == [None, None, None]


def test_arc_crossings_match_crossing_counts(surface, infinity):
    assert arc_crossings(surface, arc_to(surface, infinity, 0), arc_to(surface, infinity, 1)) == []
    first, second = arc_to(surface, infinity, Fraction(2, 5)), arc_to(surface, infinity, 4)
    crossings = arc_crossings(surface, first, second)
    assert len(crossings) == arc_crossing_count(surface, (INF, Fraction(2, 5)), (INF, Fraction(4)))
    for crossing in crossings:
        assert crossing.height_squared > 0
