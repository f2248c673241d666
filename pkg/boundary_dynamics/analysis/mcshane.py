"""
Gap widths against the McShane identity.

The gaps of one horocycle period, grouped by the simple closed geodesic
their shortcut element winds around, should have normalized widths
2/(1 + e^ℓ) per geodesic, and these sum to 1.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import mpmath

from ..exact_geometry.moebius import translation_length
from ..exact_geometry.points import to_mpf
from ..loop_cutting.gaps import Gap, enumerate_gaps
from ..surface_model.surface import SurfaceGroup

logger = logging.getLogger(__name__)


@dataclass
class GeodesicClass:
    key: str
    trace: int
    length: mpmath.mpf
    expected: mpmath.mpf
    measured: mpmath.mpf = mpmath.mpf(0)
    gaps: List[Gap] = field(default_factory=list)

    @property
    def error(self) -> mpmath.mpf:
        return abs(self.measured - self.expected)


@dataclass
class McShaneReport:
    budget: int
    total: mpmath.mpf
    partial_totals: Dict[int, mpmath.mpf]
    classes: List[GeodesicClass]
    identity_sum: mpmath.mpf

    @property
    def monotone(self) -> bool:
        values = [self.partial_totals[b] for b in sorted(self.partial_totals)]
        return all(x <= y for x, y in zip(values, values[1:]))

    def records(self) -> List[dict]:
        records = [{
            "kind": "total",
            "budget": self.budget,
            "normalized_width": mpmath.nstr(self.total, 15),
            "identity_sum": mpmath.nstr(self.identity_sum, 15),
            "monotone": self.monotone,
        }]
        for budget in sorted(self.partial_totals):
            records.append({"kind": "partial", "budget": budget,
                            "normalized_width": mpmath.nstr(self.partial_totals[budget], 15)})
        for item in self.classes:
            records.append({
                "kind": "class",
                "geodesic": item.key,
                "trace": item.trace,
                "length": mpmath.nstr(item.length, 15),
                "expected": mpmath.nstr(item.expected, 15),
                "measured": mpmath.nstr(item.measured, 15),
                "gaps": len(item.gaps),
            })
        return records


def mcshane_term(length) -> mpmath.mpf:
    return 2 / (1 + mpmath.exp(length))


def normalized_width(surface: SurfaceGroup, gap: Gap) -> mpmath.mpf:
    return to_mpf(gap.width()) / to_mpf(surface.cusp_width)


def aggregate_by_geodesic(surface: SurfaceGroup, gaps: List[Gap], precision: int = 50) -> List[GeodesicClass]:
    classes: Dict[str, GeodesicClass] = {}
    with mpmath.workdps(precision):
        for gap in gaps:
            key = gap.geodesic_key
            if key not in classes:
                length = translation_length(gap.g_pq.matrix, precision)
                classes[key] = GeodesicClass(key, abs(gap.g_pq.matrix.trace), length, mcshane_term(length))
            entry = classes[key]
            entry.measured += normalized_width(surface, gap)
            entry.gaps.append(gap)
    return sorted(classes.values(), key=lambda item: (item.trace, len(item.key), item.key))


def mcshane_identity_sum(classes: List[GeodesicClass]) -> mpmath.mpf:
    """Sum of 2/(1 + e^ℓ) over the geodesics found."""
    return mpmath.fsum(item.expected for item in classes)


def mcshane_report(surface: SurfaceGroup, budget: int, slack: int = 4, precision: int = 50,
                   gaps: Optional[List[Gap]] = None) -> McShaneReport:
    """Normalized gap widths at a word-length budget, per geodesic and in total."""
    if gaps is None:
        gaps = enumerate_gaps(surface, budget, slack=slack)
    with mpmath.workdps(precision):
        widths = [(len(gap.g_pq), normalized_width(surface, gap)) for gap in gaps]
        partial = {
            level: mpmath.fsum(width for length, width in widths if length <= level)
            for level in range(1, budget + 1)
        }
        total = mpmath.fsum(width for _, width in widths)
        classes = aggregate_by_geodesic(surface, gaps, precision)
        identity_sum = mcshane_identity_sum(classes)
    logger.info("budget %d: %d gaps in %d classes, normalized width %s",
                budget, len(gaps), len(classes), mpmath.nstr(total, 10))
    return McShaneReport(budget, total, partial, classes, identity_sum)
