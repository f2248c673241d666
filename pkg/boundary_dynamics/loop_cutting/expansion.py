"""
Derived expansions of a boundary point.

Starting at a cusp p0, each step locates x in a gap I^ε(p_{i-1}, p_i) and
moves the base cusp to p_i. The walk is carried out in the chart of the
current base cusp, where it always sits at ∞:

    x'_i = g'_i^-1 x'_{i-1},   H_i = H_{i-1} g'_i,   g_i = H_{i-1} g'_i H_{i-1}^-1

with H_0 the witness of p0. Partial products h_i = g_i ... g_1 equal H_i H_0^-1.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from ..errors import InvariantViolation, IoFailure, SamePoint, StepBudgetExceeded, TooFewSteps, UnresolvedPrecision
from ..exact_geometry.points import INF, IntervalReal, format_point, parse_point, same_point
from ..exact_geometry.tools import CircleInterval, Orientation, cyclic_order
from ..surface_model.surface import GroupElement, ParabolicPoint, SurfaceGroup
from .classify import Outcome, classify_chart
from .farey import self_intersection_count
from .gaps import Gap, transport_gap

logger = logging.getLogger(__name__)


class Terminal(Enum):
    LANDED_IN_R = "landed-in-R"
    EXHAUSTED = "exhausted"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class ExpansionStep:
    g: GroupElement
    p: ParabolicPoint
    epsilon: int
    gap: Gap
    partial_product: GroupElement
    chart_point: object
    crossings: Optional[int] = None

    @property
    def interval(self) -> CircleInterval:
        return self.gap.interval(self.epsilon)


@dataclass
class DerivedExpansion:
    x: object
    base: ParabolicPoint
    steps: List[ExpansionStep] = field(default_factory=list)
    terminal: Terminal = Terminal.EXHAUSTED

    def __len__(self):
        return len(self.steps)

    @property
    def words(self) -> List[str]:
        return [step.g.word for step in self.steps]

    @property
    def signs(self) -> List[int]:
        return [step.epsilon for step in self.steps]

    @property
    def cusps(self) -> List[ParabolicPoint]:
        return [self.base] + [step.p for step in self.steps]


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def derived_expansion(surface: SurfaceGroup, x, max_steps: int = 64, base: Optional[ParabolicPoint] = None,
                      budget: int = 12, convergents: int = 24, slack: int = 4, depth: int = 4096,
                      check_descent: bool = True) -> DerivedExpansion:
    """
    Expand x from the cusp base (∞ by default) for at most max_steps steps.

    Rational points must land in R(p_n) in finitely many steps with the
    self-intersection count of the ray to x strictly decreasing; both are
    checked. Irrational points stop with EXHAUSTED when the step budget
    runs out.

    Raises:
        SamePoint: x is the base cusp
        StepBudgetExceeded: a rational point did not terminate within max_steps
    """
    base = base or ParabolicPoint(INF, surface.identity())
    if x is INF and base.point is INF or (x is not INF and not isinstance(x, IntervalReal)
                                         and base.point is not INF and same_point(x, base.point)):
        raise SamePoint("cannot expand the base cusp itself")

    rational = _is_rational(x)
    expansion = DerivedExpansion(x, base)
    chart = base.witness
    origin_inverse = chart.inverse()
    try:
        local = origin_inverse.apply(x)
    except UnresolvedPrecision:
        expansion.terminal = Terminal.UNRESOLVED
        return expansion

    previous_count = self_intersection_count(surface, INF, local, depth=depth) if rational else None
    for index in range(max_steps + 1):
        result = classify_chart(surface, local, budget, convergents, slack, depth)
        if result.outcome is Outcome.IN_R:
            expansion.terminal = Terminal.LANDED_IN_R
            logger.debug("landed in R after %d steps", index)
            return expansion
        if result.outcome is Outcome.UNRESOLVED:
            expansion.terminal = Terminal.UNRESOLVED
            logger.debug("classification unresolved at step %d", index + 1)
            return expansion
        if index == max_steps:
            break

        step_element = result.gap.element(result.epsilon)
        g = step_element.conjugate(chart)
        next_chart = chart.multiply(step_element)
        p = ParabolicPoint(next_chart.apply(INF), next_chart)
        try:
            local = step_element.inverse().apply(local)
        except UnresolvedPrecision:
            expansion.terminal = Terminal.UNRESOLVED
            return expansion

        count = None
        if rational:
            count = self_intersection_count(surface, INF, local, depth=depth) if local is not INF else 0
            if check_descent and count >= previous_count:
                raise InvariantViolation(
                    f"self-intersections did not decrease at step {index + 1}: {previous_count} -> {count}"
                )
            previous_count = count

        expansion.steps.append(ExpansionStep(
            g=g,
            p=p,
            epsilon=result.epsilon,
            gap=transport_gap(surface, result.gap, chart),
            partial_product=next_chart.multiply(origin_inverse),
            chart_point=local,
            crossings=count,
        ))
        chart = next_chart

    if rational:
        raise StepBudgetExceeded(f"{format_point(x)} did not terminate within {max_steps} steps", rational=True)
    expansion.terminal = Terminal.EXHAUSTED
    return expansion


def _anchor(x):
    return x.midpoint if isinstance(x, IntervalReal) else x


def intersect_around(first: CircleInterval, second: CircleInterval, anchor) -> CircleInterval:
    """The component of first ∩ second containing anchor."""
    left = second.left if cyclic_order(first.left, second.left, anchor) is Orientation.POSITIVE else first.left
    right = second.right if cyclic_order(anchor, second.right, first.right) is Orientation.POSITIVE else first.right
    return CircleInterval(left, right)


def agreement_neighborhood(expansion: DerivedExpansion, n: int) -> CircleInterval:
    """
    The open interval of points whose expansion starts with the same n steps.

    Raises:
        TooFewSteps: the expansion has fewer than n steps
    """
    if n < 1 or n > len(expansion.steps):
        raise TooFewSteps(f"expansion has {len(expansion.steps)} steps, {n} requested")
    anchor = _anchor(expansion.x)
    neighborhood = expansion.steps[0].interval
    for step in expansion.steps[1:n]:
        neighborhood = intersect_around(neighborhood, step.interval, anchor)
    return neighborhood


def transcript_records(expansion: DerivedExpansion) -> List[dict]:
    header = {
        "x": format_point(expansion.x),
        "base": format_point(expansion.base.point),
        "base_word": expansion.base.witness.word,
        "terminal": expansion.terminal.value,
        "steps": len(expansion.steps),
    }
    records = [header]
    for index, step in enumerate(expansion.steps, start=1):
        records.append({
            "step": index,
            "word": step.g.word,
            "matrix": [list(row) for row in step.g.matrix.rows()],
            "p": format_point(step.p.point),
            "epsilon": step.epsilon,
            "gap": [format_point(step.interval.left), format_point(step.interval.right)],
            "crossings": step.crossings,
        })
    return records


def write_transcript(expansion: DerivedExpansion, path) -> Path:
    """Write one JSON record per line: a header, then one record per step."""
    path = Path(path)
    try:
        with open(path, "w") as f:
            for record in transcript_records(expansion):
                f.write(json.dumps(record) + "\n")
    except OSError as e:
        raise IoFailure(f"cannot write transcript {path}: {e}") from e
    logger.info("wrote %d steps to %s", len(expansion.steps), path)
    return path


def read_transcript(path) -> List[dict]:
    """Read a transcript back; points are parsed to exact values."""
    path = Path(path)
    try:
        with open(path, "r") as f:
            records = [json.loads(line) for line in f if line.strip()]
    except (OSError, json.JSONDecodeError) as e:
        raise IoFailure(f"cannot read transcript {path}: {e}") from e
    if not records:
        raise IoFailure(f"transcript {path} is empty")
    header = records[0]
    header["x"] = parse_point(header["x"])
    header["base"] = parse_point(header["base"])
    for record in records[1:]:
        record["p"] = parse_point(record["p"])
        record["gap"] = [parse_point(text) for text in record["gap"]]
    return records
