from fractions import Fraction

import pytest

from boundary_dynamics.analysis.dimension import birman_series_dimension
from boundary_dynamics.analysis.mcshane import mcshane_report
from boundary_dynamics.exact_geometry.moebius import compose
from boundary_dynamics.exact_geometry.points import parse_point, rational_bounds, to_mpf
from boundary_dynamics.exact_geometry.tools import Membership, interval_contains, intervals_disjoint
from boundary_dynamics.loop_cutting.expansion import Terminal, agreement_neighborhood, derived_expansion
from boundary_dynamics.loop_cutting.gaps import enumerate_gaps
from boundary_dynamics.topology.action import apply_to_cusp
from boundary_dynamics.topology.mapping_class import enumerate_mapping_classes

pytestmark = pytest.mark.slow


def test_gaps_at_budget_eight(surface):
    found = enumerate_gaps(surface, 8)
    theta = surface.theta_infinity.matrix
    for item in found:
        assert compose(item.g_qp.matrix, item.g_pq.matrix) == theta
    for i, first in enumerate(found):
        for second in found[i + 1:]:
            assert intervals_disjoint(first.interval_full, second.interval_full)


def test_mcshane_totals_grow_with_budget(surface):
    report = mcshane_report(surface, 8)
    assert report.monotone
    assert report.total <= 1 + 1e-12
    assert report.partial_totals[4] < report.partial_totals[8]


def test_two_hundred_rationals_terminate(surface, rng):
    for _ in range(200):
        d = rng.randint(1, 12)
        x = Fraction(rng.randrange(0, 6 * d), d)
        expansion = derived_expansion(surface, x)
        assert expansion.terminal is Terminal.LANDED_IN_R
        counts = [step.crossings for step in expansion.steps]
        assert all(earlier > later for earlier, later in zip(counts, counts[1:]))


def test_enumerated_classes_act_equivariantly(surface, rng):
    classes = enumerate_mapping_classes(surface, 2)[:4]
    points = [Fraction(rng.randint(1, 6 * d - 1), d) for d in (3, 5, 7)]
    for phi in classes:
        for x in points:
            expansion = derived_expansion(surface, x)
            image = derived_expansion(surface, apply_to_cusp(surface, phi, x))
            assert image.words == [phi.image_word(word) for word in expansion.words]
            assert image.signs == [sign * phi.orientation for sign in expansion.signs]


@pytest.fixture(scope="module")
def gaps_by_budget(surface):
    return {budget: enumerate_gaps(surface, budget) for budget in (10, 13, 16)}


def test_gaps_at_budget_sixteen_are_disjoint(surface, gaps_by_budget):
    found = gaps_by_budget[16]
    theta = surface.theta_infinity.matrix
    assert all(compose(item.g_qp.matrix, item.g_pq.matrix) == theta for item in found)
    ordered = sorted(found, key=lambda item: float(to_mpf(item.interval_full.left)))
    for first, second in zip(ordered, ordered[1:]):
        assert intervals_disjoint(first.interval_full, second.interval_full)


def test_mcshane_widths_approach_one(surface, gaps_by_budget):
    totals = [mcshane_report(surface, budget, gaps=gaps_by_budget[budget]).total for budget in (10, 13, 16)]
    assert totals == sorted(totals)
    assert totals[-1] >= 0.95
    assert totals[-1] <= 1 + 1e-12


def test_trace_six_classes_match_their_lengths(surface, gaps_by_budget):
    report = mcshane_report(surface, 16, gaps=gaps_by_budget[16])
    trace_six = [item for item in report.classes if item.trace == 6]
    assert trace_six
    for item in trace_six:
        assert item.error < 1e-9


def test_birman_series_estimates_fall_with_budget(surface, gaps_by_budget):
    estimates = [birman_series_dimension(surface, budget, gaps=gaps_by_budget[budget]).estimate
                 for budget in (10, 13, 16)]
    assert estimates[0] > estimates[1] > estimates[2]
    assert estimates[-1] <= 0.3


def test_twenty_classes_act_equivariantly(surface, rng):
    classes = enumerate_mapping_classes(surface, 4)[:20]
    assert len(classes) == 20
    points = set()
    while len(points) < 50:
        d = rng.randint(2, 12)
        points.add(Fraction(rng.randint(1, 6 * d - 1), d))
    for phi in classes:
        for x in sorted(points):
            expansion = derived_expansion(surface, x, max_steps=512)
            image = derived_expansion(surface, apply_to_cusp(surface, phi, x), max_steps=512)
            assert image.words == [phi.image_word(word) for word in expansion.words]
            assert image.signs == [sign * phi.orientation for sign in expansion.signs]


def rationals_inside(interval, count):
    lo = rational_bounds(interval.left, 12)[1]
    hi = rational_bounds(interval.right, 12)[0]
    found = []
    for k in range(1, count + 1):
        target = lo + (hi - lo) * Fraction(k, count + 1)
        bound = 10
        candidate = target.limit_denominator(bound)
        while candidate in found or interval_contains(interval, candidate) is not Membership.YES:
            bound *= 10
            candidate = target.limit_denominator(bound)
        found.append(candidate)
    return found


def test_agreement_neighborhoods_share_the_prefix(surface):
    for text in ("(0+1*sqrt(3))/1", "(1+1*sqrt(13))/3"):
        expansion = derived_expansion(surface, parse_point(text), max_steps=3)
        assert len(expansion) >= 2
        for n in range(1, len(expansion) + 1):
            for r in rationals_inside(agreement_neighborhood(expansion, n), 10):
                neighbor = derived_expansion(surface, r, max_steps=512)
                assert neighbor.words[:n] == expansion.words[:n]
                assert neighbor.signs[:n] == expansion.signs[:n]
