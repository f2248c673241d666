"""
Box-counting estimates for the Birman–Series set and for limit sets of
the pants subgroups G(γ).
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvariantViolation, UnsupportedSurface
from ..exact_geometry.moebius import MoebiusMap, apply, fixed_points
from ..exact_geometry.points import INF, rational_bounds, to_mpf
from ..exact_geometry.tools import CircleInterval, Membership, interval_contains, interval_within, intervals_disjoint
from ..loop_cutting.classify import Outcome, classify_point
from ..loop_cutting.gaps import Gap, enumerate_gaps
from ..surface_model.surface import GroupElement, ParabolicPoint, SurfaceGroup, reduce_word
from ..surface_model.tools import parabolic_witness
from ..topology.mapping_class import MappingClass, normalize_mapping_class, twist_class

logger = logging.getLogger(__name__)

SYSTOLE_SLOPES = ("0", "1", "inf")


@dataclass
class DimensionReport:
    scales: List[float]
    counts: List[int]
    exponents: List[Tuple[int, int, float]] = field(default_factory=list)

    @property
    def estimate(self) -> float:
        return self.exponents[-1][2] if self.exponents else float("nan")

    @property
    def monotone(self) -> bool:
        return all(x <= y for x, y in zip(self.counts, self.counts[1:]))

    def records(self, label: str) -> List[dict]:
        records = [{"kind": "scale", "set": label, "scale": s, "count": n} for s, n in zip(self.scales, self.counts)]
        for start, stop, slope in self.exponents:
            records.append({"kind": "exponent", "set": label, "window": [start, stop], "exponent": round(slope, 12)})
        records.append({"kind": "estimate", "set": label, "exponent": round(self.estimate, 12),
                        "monotone": self.monotone})
        return records


def fit_exponents(scales: Sequence[float], counts: Sequence[int], window: int = 3) -> List[Tuple[int, int, float]]:
    """Least-squares slopes of log N against log 1/s over sliding windows of consecutive scales."""
    x = -np.log(np.asarray(scales, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    window = min(window, len(scales))
    exponents = []
    for start in range(0, len(scales) - window + 1):
        stop = start + window
        slope = np.polyfit(x[start:stop], y[start:stop], 1)[0] if window > 1 else float("nan")
        exponents.append((start, stop - 1, float(slope)))
    return exponents


def count_boxes(components: np.ndarray, scale: float) -> int:
    """Number of grid cells of side `scale` meeting a sorted union of closed intervals."""
    if len(components) == 0:
        return 0
    starts = np.floor(components[:, 0] / scale).astype(np.int64)
    ends = np.maximum(np.ceil(components[:, 1] / scale).astype(np.int64) - 1, starts)
    previous = np.maximum.accumulate(np.concatenate(([-1], ends[:-1])))
    effective = np.maximum(starts, previous + 1)
    return int(np.sum(np.maximum(ends - effective + 1, 0)))


def remainder_components(surface: SurfaceGroup, gaps: List[Gap], periods: int = 1) -> np.ndarray:
    """Closed components of [0, periods·c] left uncovered by the gaps and their translates."""
    width = float(surface.cusp_width)
    span = width * periods
    covered = []
    for gap in gaps:
        left, right = float(to_mpf(gap.interval_full.left)), float(to_mpf(gap.interval_full.right))
        for shift in range(-1, periods + 1):
            lo, hi = left + shift * width, right + shift * width
            if hi > 0 and lo < span:
                covered.append((max(lo, 0.0), min(hi, span)))
    covered.sort()
    components = []
    cursor = 0.0
    for lo, hi in covered:
        if lo > cursor:
            components.append((cursor, lo))
        cursor = max(cursor, hi)
    if cursor < span:
        components.append((cursor, span))
    return np.asarray(components, dtype=float).reshape(-1, 2)


def default_levels(surface: SurfaceGroup, components: np.ndarray) -> int:
    """Finest dyadic level still coarser than twice the longest uncovered component."""
    width = float(surface.cusp_width)
    longest = float(np.max(components[:, 1] - components[:, 0])) if len(components) else width
    return max(3, int(math.floor(math.log2(width / (2 * longest)))))


def birman_series_dimension(surface: SurfaceGroup, budget: int, levels: Optional[int] = None, slack: int = 4,
                            periods: int = 1, gaps: Optional[List[Gap]] = None) -> DimensionReport:
    """Box-count the complement of the gaps in one horocycle period at dyadic scales c/2^k."""
    if gaps is None:
        gaps = enumerate_gaps(surface, budget, slack=slack)
    components = remainder_components(surface, gaps, periods)
    levels = levels or default_levels(surface, components)
    width = float(surface.cusp_width)
    scales = [width / 2 ** k for k in range(1, levels + 1)]
    counts = [count_boxes(components, s) for s in scales]
    report = DimensionReport(scales, counts, fit_exponents(scales, counts))
    logger.info("Birman-Series set at budget %d: %d components, estimate %.4f",
                budget, len(components), report.estimate)
    return report


class SubgroupGraph:
    """Folded graph of a finitely generated subgroup of a free group, for membership tests."""

    def __init__(self, words: Sequence[str]):
        self._parent: Dict[int, int] = {0: 0}
        edges = []
        size = 1
        for word in words:
            word = reduce_word(word)
            current = 0
            for index, letter in enumerate(word):
                if index == len(word) - 1:
                    target = 0
                else:
                    target = size
                    self._parent[size] = size
                    size += 1
                if letter.islower():
                    edges.append((current, letter, target))
                else:
                    edges.append((target, letter.lower(), current))
                current = target
        self._next = self._fold(edges)

    def _find(self, vertex: int) -> int:
        while self._parent[vertex] != vertex:
            self._parent[vertex] = self._parent[self._parent[vertex]]
            vertex = self._parent[vertex]
        return vertex

    def _fold(self, edges) -> Dict[Tuple[int, str], int]:
        changed = True
        while changed:
            changed = False
            outgoing: Dict[Tuple[int, str], int] = {}
            for u, letter, v in edges:
                u, v = self._find(u), self._find(v)
                for key, target in (((u, letter), v), ((v, letter.upper()), u)):
                    other, target = self._find(outgoing.setdefault(key, target)), self._find(target)
                    if other != target:
                        self._parent[max(other, target)] = min(other, target)
                        changed = True
        result = {}
        for u, letter, v in edges:
            u, v = self._find(u), self._find(v)
            result[(u, letter)] = v
            result[(v, letter.upper())] = u
        return result

    def contains(self, word: str) -> bool:
        vertex = self._find(0)
        for letter in reduce_word(word):
            vertex = self._next.get((vertex, letter))
            if vertex is None:
                return False
        return vertex == self._find(0)


CONTRACTION_LETTERS = ("w", "W", "k", "K")


def _isometric_arc(center: Fraction, m: MoebiusMap) -> CircleInterval:
    radius = Fraction(1, abs(m.c))
    return CircleInterval(center - radius, center + radius)


def contraction_intervals(w: MoebiusMap, k: MoebiusMap) -> Dict[str, CircleInterval]:
    """
    Ping-pong intervals for the free basis {w, k} of a pants subgroup.

    w and its inverse contract onto their isometric circles; the
    translation k contracts onto the two horocyclic ends outside a window
    of one period centred on them. Each letter carries the closed
    complement of its inverse's interval into the closure of its own.

    Raises:
        InvariantViolation: k is not a translation, or the intervals fail ping-pong
    """
    if w.c == 0:
        raise InvariantViolation(f"{w.rows()} fixes ∞")
    if k.c != 0 or k.a != k.d or k.b == 0:
        raise InvariantViolation(f"{k.rows()} is not a translation")
    shift = Fraction(k.b, k.d)
    width = abs(shift)
    arcs = {"w": _isometric_arc(Fraction(w.a, w.c), w), "W": _isometric_arc(Fraction(-w.d, w.c), w)}
    lo = min(arc.left for arc in arcs.values())
    hi = max(arc.right for arc in arcs.values())
    window_left = (lo + hi) / 2 - width / 2
    left_end, right_end = CircleInterval(INF, window_left), CircleInterval(window_left + width, INF)
    arcs["k"], arcs["K"] = (left_end, right_end) if shift < 0 else (right_end, left_end)

    maps = {"w": w, "W": w.inverse(), "k": k, "K": k.inverse()}
    for i, first in enumerate(CONTRACTION_LETTERS):
        for second in CONTRACTION_LETTERS[i + 1:]:
            if not intervals_disjoint(arcs[first], arcs[second]):
                raise InvariantViolation(f"contraction intervals of {first} and {second} overlap")
    for letter in CONTRACTION_LETTERS:
        source = arcs[letter.swapcase()]
        image = CircleInterval(apply(maps[letter], source.right), apply(maps[letter], source.left))
        if not interval_within(image, arcs[letter]):
            raise InvariantViolation(f"letter {letter} does not play ping-pong")
    return arcs


@dataclass(eq=False)
class LimitSetModel:
    """
    The pants subgroup G(γ) = <w, v w^-1 v^-1> of a simple closed geodesic γ = w.

    (w, v) is a basis with w v w^-1 v^-1 equal to the peripheral word, so
    the product of the two generators is the peripheral element k, and
    {w, k} is the free basis whose contraction intervals cover ΛG(γ).
    """

    surface: SurfaceGroup
    w: GroupElement
    v: GroupElement
    slope: str = ""

    def __post_init__(self):
        product = reduce_word(self.w.word + self.partner.word)
        if product != self.surface.peripheral_word:
            raise InvariantViolation(f"{self.w.word} * {self.partner.word} is not {self.surface.peripheral_word}")
        self._graph = SubgroupGraph([self.w.word, self.partner.word])
        self.contraction = contraction_intervals(self.w.matrix, self.surface.peripheral.matrix)
        self.window_left = next(arc.right for arc in self.contraction.values() if arc.left is INF)

    @property
    def partner(self) -> GroupElement:
        return self.v.multiply(self.w.inverse()).multiply(self.v.inverse())

    @property
    def generators(self) -> Tuple[GroupElement, GroupElement]:
        return self.w, self.partner

    def contains_word(self, word: str) -> bool:
        return self._graph.contains(word)


def model_from_class(surface: SurfaceGroup, phi: MappingClass, slope: str = "") -> LimitSetModel:
    if phi.orientation != 1:
        raise InvariantViolation("limit-set models need an orientation-preserving class")
    return LimitSetModel(surface, surface.element(phi.images[0]), surface.element(phi.images[1]), slope)


def slope_model(surface: SurfaceGroup, slope: str) -> LimitSetModel:
    """The model for the simple closed geodesic of slope "inf" or an integer n (the curve a b^n)."""
    if not surface.modular_commutator:
        raise UnsupportedSurface("slope models are implemented for the punctured torus")
    slope = slope.strip().lower()
    if slope in ("inf", "infinity", "∞"):
        phi = normalize_mapping_class({"a": "b", "b": "A"}, {"a": "B", "b": "a"}, surface.peripheral_word, "r4")
    else:
        n = int(slope)
        phi = twist_class("s" * n if n >= 0 else "S" * -n, surface.peripheral_word)
    return model_from_class(surface, phi, slope)


def _homogeneous(x) -> Tuple[float, float]:
    return (1.0, 0.0) if x is INF else (float(to_mpf(x)), 1.0)


def cover_pieces(model: LimitSetModel, depth: int) -> np.ndarray:
    """
    Real endpoints of the level-`depth` cover of ΛG(γ) in one period.

    The pieces are g(D_l) for reduced words g·l of length `depth` starting
    with w or W, so each lies in the closure of D_w or D_W.
    """
    if depth < 1:
        raise ValueError("cover depth must be at least 1")
    maps = {"w": model.w.matrix, "W": model.w.matrix.inverse(),
            "k": model.surface.peripheral.matrix, "K": model.surface.peripheral.matrix.inverse()}
    matrices = np.array([[[m.a, m.b], [m.c, m.d]] for m in (maps[letter] for letter in CONTRACTION_LETTERS)],
                        dtype=float)
    ends = np.array([np.column_stack([_homogeneous(model.contraction[letter].left),
                                      _homogeneous(model.contraction[letter].right)])
                     for letter in CONTRACTION_LETTERS])
    openers = (0, 1)

    frontier = np.eye(2)[None, :, :]
    last = np.array([-1])
    for step in range(depth - 1):
        blocks, tails = [], []
        for index in openers if step == 0 else range(4):
            keep = last != (index ^ 1)
            blocks.append(frontier[keep] @ matrices[index])
            tails.append(np.full(int(np.sum(keep)), index))
        frontier = np.concatenate(blocks)
        last = np.concatenate(tails)

    images = np.concatenate([frontier[last != (index ^ 1)] @ ends[index]
                             for index in (openers if depth == 1 else range(4))])
    points = images[:, 0, :] / images[:, 1, :]
    pieces = np.column_stack([points.min(axis=1), points.max(axis=1)])
    return pieces[np.argsort(pieces[:, 0])]


def limit_set_dimension(model: LimitSetModel, depth: int = 10, levels: int = 24,
                        fraction: float = 0.1) -> DimensionReport:
    """
    Box-count the level-`depth` contraction-interval cover of ΛG(γ).

    The grid starts at the left end of the period window. Only scales
    whose counts stay below `fraction` of the number of pieces enter the
    fit, so the pieces are still small against the boxes.
    """
    width = float(model.surface.cusp_width)
    pieces = cover_pieces(model, depth) - float(model.window_left)
    limit = fraction * len(pieces)
    scales, counts = [], []
    for k in range(1, levels + 1):
        scale = width / 2 ** k
        count = count_boxes(pieces, scale)
        if count >= limit:
            break
        scales.append(scale)
        counts.append(count)
    report = DimensionReport(scales, counts, fit_exponents(scales, counts))
    logger.info("limit set of slope %s: %d cover pieces, estimate %.4f", model.slope, len(pieces), report.estimate)
    return report


def limit_set_membership(model: LimitSetModel, x) -> Membership:
    """
    Whether a cusp point lies in ΛG(γ).

    Cusp points of the limit set are exactly the G-orbit of ∞, and h∞ = x
    for some h in G iff the witness of x lies in G.
    """
    if x is INF:
        return Membership.YES
    witness = parabolic_witness(model.surface, x).witness
    return Membership.YES if model.contains_word(witness.word) else Membership.NO


def discontinuity_interval(model: LimitSetModel) -> CircleInterval:
    """The arc cut off by the axis of w on the side away from the cusp ∞."""
    attracting, repelling = fixed_points(model.w.matrix)
    return CircleInterval.between(attracting, repelling, INF)


def _sample_rationals(interval: CircleInterval, samples: int, max_denominator: int) -> List[Fraction]:
    """Distinct small-denominator rationals spread across a finite interval."""
    _, lo = rational_bounds(interval.left, 8)
    hi, _ = rational_bounds(interval.right, 8)
    found = []
    for k in range(1, samples + 1):
        x = (lo + (hi - lo) * Fraction(k, samples + 1)).limit_denominator(max_denominator)
        if x not in found and interval_contains(interval, x) is Membership.YES:
            found.append(x)
    return found


def discontinuity_report(model: LimitSetModel, samples: int = 16, budget: int = 12,
                         max_denominator: int = 200) -> dict:
    """
    First derived elements of rationals spread across the discontinuity interval.

    Points of the interval whose first derived element lies in G(γ) should
    all share it; `consistent` records whether the samples agree.
    """
    surface = model.surface
    interval = discontinuity_interval(model)
    base = ParabolicPoint(INF, surface.identity())
    first_words = Counter()
    in_group = set()
    points = _sample_rationals(interval, samples, max_denominator)
    for x in points:
        result = classify_point(surface, base, x, budget=budget)
        if result.outcome is not Outcome.IN_GAP:
            continue
        word = result.g.word
        first_words[word] += 1
        if model.contains_word(word):
            in_group.add(word)
    return {
        "slope": model.slope,
        "interval": interval,
        "samples": len(points),
        "first_elements": dict(sorted(first_words.items())),
        "in_group": sorted(in_group),
        "consistent": len(in_group) <= 1,
    }
