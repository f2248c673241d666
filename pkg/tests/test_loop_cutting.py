from fractions import Fraction

import pytest

from boundary_dynamics.errors import NotInDelta, SamePoint, TooFewSteps
from boundary_dynamics.exact_geometry.moebius import MoebiusMap, compose
from boundary_dynamics.exact_geometry.points import INF, make_surd, parse_point, same_point
from boundary_dynamics.exact_geometry.tools import (
    Membership,
    interval_contains,
    interval_within,
    intervals_disjoint,
)
from boundary_dynamics.loop_cutting.classify import Outcome, classify_point
from boundary_dynamics.loop_cutting.expansion import (
    Terminal,
    agreement_neighborhood,
    derived_expansion,
    read_transcript,
    write_transcript,
)
from boundary_dynamics.loop_cutting.farey import (
    Oracle,
    arc_crossing_count,
    chart_cutting_sequence,
    floor_point,
    geodesics_cross,
    self_intersection_count,
)
from boundary_dynamics.loop_cutting.gaps import enumerate_gaps, gap, reverse_gap
from boundary_dynamics.surface_model.tools import parabolic_point

GOLDEN_CONJUGATE = "(-1+1*sqrt(5))/2"


@pytest.fixture(scope="module")
def gap_at_one(surface, infinity):
    return gap(surface, infinity, parabolic_point(surface, Fraction(1)))


def test_chart_cutting_sequence():
    assert chart_cutting_sequence(Fraction(3)) == [(INF, 2, 3), (INF, 3, 4)]
    triangles = chart_cutting_sequence(Fraction(2, 5))
    assert triangles[0] == (INF, 0, 1)
    assert triangles[-1][1] == Fraction(2, 5)


def test_geodesics_cross():
    assert geodesics_cross(Fraction(0), Fraction(2), Fraction(1), INF)
    assert not geodesics_cross(Fraction(0), Fraction(1), Fraction(2), INF)
    assert not geodesics_cross(Fraction(0), Fraction(1), Fraction(1), INF)


def test_floor_point():
    assert floor_point(Fraction(-7, 2)) == -4
    assert floor_point(parse_point("(0+1*sqrt(3))/1")) == 1
    assert floor_point(Fraction(5)) == 5


def test_integer_rays_are_simple(surface):
    for n in range(-3, 8):
        assert self_intersection_count(surface, INF, Fraction(n)) == 0


def test_some_short_ray_is_not_simple(surface):
    counts = [
        self_intersection_count(surface, INF, Fraction(n, d))
        for d in range(2, 8)
        for n in range(1, d)
    ]
    assert max(counts) >= 1


def test_bounded_word_search_is_a_lower_bound(surface):
    for x in [Fraction(1, 2), Fraction(2, 3), Fraction(3, 5), Fraction(7, 4)]:
        exact = self_intersection_count(surface, INF, x)
        bounded = self_intersection_count(surface, INF, x, oracle=Oracle.BOUNDED_WORD_SEARCH, word_bound=4)
        assert bounded <= exact


def test_arc_crossing_count_is_symmetric(surface):
    pairs = [
        ((INF, Fraction(1)), (INF, Fraction(1, 2))),
        ((INF, Fraction(3)), (Fraction(0), Fraction(2, 3))),
        ((INF, Fraction(2, 5)), (INF, Fraction(4))),
    ]
    for arc, other in pairs:
        assert arc_crossing_count(surface, arc, other) == arc_crossing_count(surface, other, arc)


def test_gap_at_one(gap_at_one):
    assert gap_at_one.q.point == 1
    assert gap_at_one.g_pq.word == "A"
    assert gap_at_one.g_qp.matrix == MoebiusMap(4, -5, 1, -1)
    assert same_point(gap_at_one.a_pq, parse_point(GOLDEN_CONJUGATE))
    assert same_point(gap_at_one.b_qp, parse_point("(5-1*sqrt(5))/2"))
    assert gap_at_one.interval_plus.right == 1
    assert gap_at_one.interval_minus.left == 1
    assert same_point(gap_at_one.width(), make_surd(3, -1, 5))


def test_gap_composition_identity(surface, gap_at_one):
    assert compose(gap_at_one.g_qp.matrix, gap_at_one.g_pq.matrix) == surface.theta_infinity.matrix


def test_gap_translates_by_cusp_width(surface, infinity, gap_at_one):
    shifted = gap(surface, infinity, parabolic_point(surface, Fraction(7)))
    theta = surface.theta_infinity
    assert shifted.g_pq.matrix == gap_at_one.g_pq.conjugate(theta).matrix
    assert same_point(shifted.a_pq, gap_at_one.a_pq + 6)
    assert same_point(shifted.b_qp, gap_at_one.b_qp + 6)


def test_reverse_gap(surface, gap_at_one):
    once = reverse_gap(surface, gap_at_one)
    twice = reverse_gap(surface, once)
    assert once.q.point == -2
    assert twice.q.point == -5
    assert once.geodesic_key == twice.geodesic_key == gap_at_one.geodesic_key == "A"


def test_gap_rejects_non_simple_arcs(surface, infinity):
    for d in range(2, 8):
        for n in range(1, d):
            q = Fraction(n, d)
            if self_intersection_count(surface, INF, q):
                with pytest.raises(NotInDelta):
                    gap(surface, infinity, parabolic_point(surface, q))
                return
    pytest.fail("no non-simple ray found")


def test_gap_same_point(surface, infinity):
    with pytest.raises(SamePoint):
        gap(surface, infinity, infinity)


def test_enumerate_gaps_integer_words(surface):
    words = {item.q.point: item.g_pq.word for item in enumerate_gaps(surface, 5)}
    assert words[0] == "BA"
    assert words[1] == "A"
    assert words[2] == "b"
    assert words[3] == "ba"
    assert words[4] == "baB"
    assert words[5] == "baBAB"


def test_enumerate_gaps_are_disjoint_and_sorted(surface):
    found = enumerate_gaps(surface, 4)
    assert found
    for item in found:
        assert 0 <= item.q.point < 6
        assert len(item.g_pq) <= 4
    for first, second in zip(found, found[1:]):
        assert first.interval_full.left < second.interval_full.left
    for i, first in enumerate(found):
        for second in found[i + 1:]:
            assert intervals_disjoint(first.interval_full, second.interval_full)


def test_enumerate_gaps_grows_with_budget(surface):
    small = {item.q.point for item in enumerate_gaps(surface, 3)}
    large = {item.q.point for item in enumerate_gaps(surface, 5)}
    assert small <= large
    assert len(small) < len(large)


def test_classify_rational_in_gaps(surface, infinity, gap_at_one):
    plus = classify_point(surface, infinity, Fraction(4, 5))
    assert plus.outcome is Outcome.IN_GAP
    assert plus.epsilon == 1
    assert plus.q.point == 1
    assert plus.g.word == "A"

    minus = classify_point(surface, infinity, Fraction(6, 5))
    assert minus.outcome is Outcome.IN_GAP
    assert minus.epsilon == -1
    assert minus.q.point == 1
    assert minus.g.matrix == gap_at_one.g_qp.inverse().matrix


def test_classify_points_in_r(surface, infinity):
    assert classify_point(surface, infinity, Fraction(1)).outcome is Outcome.IN_R
    endpoint = classify_point(surface, infinity, parse_point(GOLDEN_CONJUGATE))
    assert endpoint.outcome in (Outcome.IN_R, Outcome.UNRESOLVED)


def test_classify_quadratic_irrational(surface, infinity):
    result = classify_point(surface, infinity, parse_point("(0+1*sqrt(3))/1"))
    assert result.outcome is Outcome.IN_GAP
    assert result.epsilon == 1
    assert result.q.point == 2
    assert result.g.word == "b"


def test_classify_decimal_enclosure(surface, infinity):
    result = classify_point(surface, infinity, parse_point("0.8"))
    assert result.outcome is Outcome.IN_GAP
    assert result.q.point == 1
    assert result.epsilon == 1


def test_classify_from_another_cusp(surface):
    p = parabolic_point(surface, Fraction(1))
    x = Fraction(9, 14)
    result = classify_point(surface, p, x)
    assert result.outcome is Outcome.IN_GAP
    assert result.gap.p.point == 1
    assert result.q.point == Fraction(2, 3)
    assert interval_contains(result.gap.interval(result.epsilon), x) is Membership.YES


def test_classify_same_point(surface, infinity):
    with pytest.raises(SamePoint):
        classify_point(surface, infinity, INF)
    with pytest.raises(SamePoint):
        classify_point(surface, parabolic_point(surface, Fraction(1)), Fraction(1))


def test_expansion_of_a_rational(surface):
    expansion = derived_expansion(surface, Fraction(4, 5))
    assert expansion.terminal is Terminal.LANDED_IN_R
    assert expansion.words == ["A"]
    assert expansion.signs == [1]
    assert expansion.steps[0].p.point == 1
    assert expansion.steps[0].chart_point == 3
    assert expansion.steps[0].crossings == 0


def test_rational_expansions_terminate_with_descending_crossings(surface, rng):
    for _ in range(12):
        d = rng.randint(2, 9)
        x = Fraction(rng.randint(1, 6 * d - 1), d)
        expansion = derived_expansion(surface, x)
        assert expansion.terminal is Terminal.LANDED_IN_R
        counts = [step.crossings for step in expansion.steps]
        assert counts == sorted(counts, reverse=True)
        assert len(set(counts)) == len(counts)
        if counts:
            assert counts[-1] == 0
        for step in expansion.steps:
            assert step.partial_product.apply(INF) == step.p.point


def test_expansion_of_a_quadratic_irrational(surface):
    x = parse_point("(0+1*sqrt(3))/1")
    expansion = derived_expansion(surface, x, max_steps=3)
    assert expansion.terminal is not Terminal.LANDED_IN_R
    assert expansion.words[0] == "b"
    assert expansion.signs[0] == 1
    assert same_point(expansion.steps[0].chart_point, parse_point("(1+1*sqrt(3))/1"))


def test_agreement_neighborhoods_are_nested(surface):
    x = parse_point("(0+1*sqrt(3))/1")
    expansion = derived_expansion(surface, x, max_steps=3)
    first = agreement_neighborhood(expansion, 1)
    assert interval_contains(first, x) is Membership.YES
    for n in range(2, len(expansion) + 1):
        current = agreement_neighborhood(expansion, n)
        assert interval_contains(current, x) is Membership.YES
        assert interval_within(current, first)
        first = current
    with pytest.raises(TooFewSteps):
        agreement_neighborhood(expansion, len(expansion) + 1)


def test_neighbors_share_the_first_step(surface):
    x = parse_point("(0+1*sqrt(3))/1")
    expansion = derived_expansion(surface, x, max_steps=1)
    neighborhood = agreement_neighborhood(expansion, 1)
    neighbor = Fraction(7, 4)
    assert interval_contains(neighborhood, neighbor) is Membership.YES
    assert derived_expansion(surface, neighbor).words[0] == expansion.words[0]


def test_expansion_same_point(surface):
    with pytest.raises(SamePoint):
        derived_expansion(surface, INF)


def test_transcript_round_trip(surface, tmp_path):
    expansion = derived_expansion(surface, Fraction(4, 5))
    path = write_transcript(expansion, tmp_path / "transcript.jsonl")
    records = read_transcript(path)
    header, step = records
    assert header["x"] == Fraction(4, 5)
    assert header["base"] is INF
    assert header["terminal"] == "landed-in-R"
    assert step["word"] == "A"
    assert step["p"] == 1
    assert step["matrix"] == [[1, 1], [1, 2]]
