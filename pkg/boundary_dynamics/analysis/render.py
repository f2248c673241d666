"""
Deterministic SVG picture of the gaps in one horocycle period.
"""

import logging
import math
from pathlib import Path
from typing import List, Optional

import mpmath
from jinja2 import Environment, FileSystemLoader, select_autoescape

from ..errors import IoFailure
from ..exact_geometry.points import format_point, to_mpf
from ..loop_cutting.gaps import Gap, enumerate_gaps
from ..surface_model.surface import SurfaceGroup

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / "templates"

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

WIDTH = 1000
HEIGHT = 120


def _environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        autoescape=select_autoescape(["svg", "xml", "j2"]),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )


def _coordinate(value, period) -> str:
    with mpmath.workdps(30):
        x = to_mpf(value) / to_mpf(period) * WIDTH
        x = min(max(x, mpmath.mpf(0)), mpmath.mpf(WIDTH))
        return mpmath.nstr(x, 12, min_fixed=-1, max_fixed=12, strip_zeros=False)


def gap_rectangles(surface: SurfaceGroup, gaps: List[Gap]) -> List[dict]:
    """One rectangle per gap, clipped to the period and colored by its geodesic."""
    period = surface.cusp_width
    colors = {}
    rectangles = []
    for gap in gaps:
        key = gap.geodesic_key
        if key not in colors:
            colors[key] = PALETTE[len(colors) % len(PALETTE)]
        left = _coordinate(gap.interval_full.left, period)
        right = _coordinate(gap.interval_full.right, period)
        with mpmath.workdps(30):
            width = mpmath.nstr(mpmath.mpf(right) - mpmath.mpf(left), 12, min_fixed=-1, max_fixed=12,
                                strip_zeros=False)
        rectangles.append({
            "q": format_point(gap.q.point),
            "geodesic": key,
            "x": left,
            "width": width,
            "color": colors[key],
        })
    return rectangles


def render_svg(surface: SurfaceGroup, budget: int, gaps: Optional[List[Gap]] = None, slack: int = 4) -> str:
    if gaps is None:
        gaps = enumerate_gaps(surface, budget, slack=slack)
    period = surface.cusp_width
    ticks = [{"x": int(WIDTH * k / period), "label": str(k)} for k in range(math.floor(period) + 1)]
    template = _environment().get_template("gaps.svg.j2")
    return template.render(
        width=WIDTH,
        height=HEIGHT,
        bar_y=20,
        bar_height=60,
        budget=budget,
        gaps=gap_rectangles(surface, gaps),
        ticks=ticks,
    )


def render_gaps(surface: SurfaceGroup, path, budget: int, slack: int = 4) -> Path:
    """Write the picture for word-length budget `budget` to path."""
    path = Path(path)
    svg = render_svg(surface, budget, slack=slack)
    try:
        path.write_text(svg)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e
    logger.info("rendered gaps at budget %d to %s", budget, path)
    return path
