"""
Systems of cusp arcs and the filling test.

Each arc λ(p, q) is drawn in the chart of p as the vertical lift [∞, t].
Compactifying the cusp to one vertex turns an arc system into an embedded
graph: its vertices are the cusp and the crossing points, its rotation at
a crossing is read off the two lifts through it and its rotation at the
cusp is the order of the arc ends along the horocycle. The system fills
when that graph is connected and its faces, traced from the rotation
system, give the Euler characteristic of the closed surface.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx

from ..errors import InconsistentRotation
from ..exact_geometry.moebius import MoebiusMap, apply
from ..exact_geometry.points import INF, format_point
from ..surface_model.surface import ParabolicPoint, SurfaceGroup
from ..surface_model.tools import parabolic_witness
from ..loop_cutting.farey import chart_crossings

logger = logging.getLogger(__name__)

CUSP = "cusp"


@dataclass(frozen=True)
class CuspArc:
    """The geodesic arc between two cusp points, reduced to its chart lift [∞, target]."""

    p: ParabolicPoint
    q: ParabolicPoint

    @property
    def target(self) -> Fraction:
        return self.p.witness.inverse().apply(self.q.point)

    def ends(self, surface: SurfaceGroup) -> Tuple[Fraction, Fraction]:
        """Horocycle positions, modulo the cusp width, of the start and the end of the arc."""
        target = self.target
        foot = parabolic_witness(surface, target).witness.inverse().apply(INF)
        width = surface.cusp_width
        return target % width, foot % width

    def key(self, surface: SurfaceGroup) -> frozenset:
        return frozenset(self.ends(surface))

    def reversed(self) -> "CuspArc":
        return CuspArc(self.q, self.p)

    def __str__(self):
        return f"[{format_point(self.p.point)}, {format_point(self.q.point)}]"


@dataclass(frozen=True)
class Crossing:
    """A crossing of arc `first` at height² `height_squared` with a translate of arc `second`."""

    first: int
    second: int
    element: MoebiusMap
    height_squared: Fraction
    partner_height_squared: Fraction

    @property
    def position(self) -> Tuple[int, Fraction]:
        return self.first, self.height_squared

    @property
    def partner_position(self) -> Tuple[int, Fraction]:
        return self.second, self.partner_height_squared

    def vertex_key(self) -> Tuple:
        return tuple(sorted((self.position, self.partner_position)))


def arc_crossings(surface: SurfaceGroup, first: CuspArc, second: CuspArc, depth: int = 4096) -> List[Crossing]:
    """
    Crossing points of the projections of two arcs, each listed once.

    When both name the same arc of the surface this lists its
    self-crossings.
    """
    same = first.key(surface) == second.key(surface)
    if same:
        second = first
    found = []
    for crossing in chart_crossings(surface, first.target, second.target, depth):
        found.append(Crossing(0, 1, crossing.element, crossing.height_squared, crossing.partner_height_squared))
    if same:
        # each self-crossing meets the lift twice
        found = [c for c in found if c.height_squared > c.partner_height_squared]
    return found


@dataclass
class Census:
    vertices: int
    edges: int
    faces: int
    connected: bool
    face_walks: List[List[int]] = field(default_factory=list)

    @property
    def euler(self) -> int:
        return self.vertices - self.edges + self.faces


@dataclass
class FillingResult:
    filling: bool
    census: Census
    witness_face: Optional[List[int]] = None

    def __bool__(self):
        return self.filling


class ArcSystem:
    """A list of distinct cusp arcs with their crossing data."""

    def __init__(self, surface: SurfaceGroup, arcs: List[CuspArc], depth: int = 4096):
        self.surface = surface
        self.depth = depth
        self.arcs: List[CuspArc] = []
        seen = set()
        for arc in arcs:
            key = arc.key(surface)
            if key in seen:
                continue
            seen.add(key)
            self.arcs.append(arc)
        self.crossings: List[Crossing] = self._collect_crossings()
        self.cusp_cyclic_order = self._cusp_order()

    @classmethod
    def from_expansion(cls, surface: SurfaceGroup, expansion, n: int, depth: int = 4096) -> "ArcSystem":
        cusps = expansion.cusps
        arcs = [CuspArc(cusps[i - 1], cusps[i]) for i in range(1, min(n, len(expansion.steps)) + 1)]
        return cls(surface, arcs, depth)

    def _collect_crossings(self) -> List[Crossing]:
        crossings = []
        for i, first in enumerate(self.arcs):
            for j, second in enumerate(self.arcs):
                for c in chart_crossings(self.surface, first.target, second.target, self.depth):
                    crossings.append(Crossing(i, j, c.element, c.height_squared, c.partner_height_squared))
        return crossings

    def _cusp_order(self) -> List[Tuple[Fraction, int, str]]:
        ends = []
        for index, arc in enumerate(self.arcs):
            start, end = arc.ends(self.surface)
            if start == end:
                raise InconsistentRotation(f"both ends of {arc} meet the horocycle at {start}")
            ends.extend([(start, index, "start"), (end, index, "end")])
        ends.sort()
        positions = [position for position, _, _ in ends]
        if len(set(positions)) != len(positions):
            raise InconsistentRotation("two arc ends share a horocycle position")
        return ends

    def crossing_count(self, i: int, j: int) -> int:
        """Number of crossing points between arcs i and j (self-crossings when i == j)."""
        count = sum(1 for c in self.crossings if c.first == i and c.second == j)
        return count // 2 if i == j else count

    def _rotation(self) -> Tuple[Dict[int, int], Dict[int, int], int, int]:
        """Darts, the edge involution and the rotation around each vertex."""
        vertex_of: Dict[Tuple, Tuple] = {}
        for c in self.crossings:
            vertex_of[c.position] = c.vertex_key()

        involution: Dict[int, int] = {}
        # darts at each crossing, by (position, direction)
        at_crossing: Dict[Tuple, Dict[Tuple, int]] = {}
        cusp_darts: Dict[Tuple[int, str], int] = {}
        dart = 0
        edges = 0
        for index in range(len(self.arcs)):
            heights = sorted({c.height_squared for c in self.crossings if c.first == index}, reverse=True)
            points = [None] + heights + [None]
            for k in range(len(points) - 1):
                upper, lower = dart, dart + 1
                involution[upper], involution[lower] = lower, upper
                dart += 2
                edges += 1
                if points[k] is None:
                    cusp_darts[(index, "start")] = upper
                else:
                    position = (index, points[k])
                    at_crossing.setdefault(vertex_of[position], {})[(position, "down")] = upper
                if points[k + 1] is None:
                    cusp_darts[(index, "end")] = lower
                else:
                    position = (index, points[k + 1])
                    at_crossing.setdefault(vertex_of[position], {})[(position, "up")] = lower

        rotation: Dict[int, int] = {}
        cusp_cycle = [cusp_darts[(index, end)] for _, index, end in self.cusp_cyclic_order]
        for k, d in enumerate(cusp_cycle):
            rotation[d] = cusp_cycle[(k + 1) % len(cusp_cycle)]

        for c in self.crossings:
            darts = at_crossing[c.vertex_key()]
            if len(darts) != 4:
                raise InconsistentRotation(f"crossing of arcs {c.first}, {c.second} has {len(darts)} darts")
            here, there = c.position, c.partner_position
            if c.position != c.vertex_key()[0]:
                continue
            # counterclockwise from the upward dart of the vertical lift
            toward_infinity_left = apply(c.element, INF) < self.arcs[c.first].target
            left = (there, "up") if toward_infinity_left else (there, "down")
            right = (there, "down") if toward_infinity_left else (there, "up")
            cycle = [darts[(here, "up")], darts[left], darts[(here, "down")], darts[right]]
            for k, d in enumerate(cycle):
                rotation[d] = cycle[(k + 1) % 4]

        if len(rotation) != dart:
            raise InconsistentRotation(f"rotation covers {len(rotation)} of {dart} darts")
        return involution, rotation, edges, len(at_crossing) + 1

    def graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_node(CUSP)
        for index in range(len(self.arcs)):
            heights = sorted({c.height_squared for c in self.crossings if c.first == index}, reverse=True)
            stops = [CUSP] + [self._vertex(index, h) for h in heights] + [CUSP]
            for u, v in zip(stops, stops[1:]):
                graph.add_edge(u, v, arc=index)
        return graph

    def _vertex(self, index: int, height_squared: Fraction):
        return next(c.vertex_key() for c in self.crossings if c.position == (index, height_squared))

    def faces(self) -> List[List[int]]:
        involution, rotation, _, _ = self._rotation()
        unvisited = set(involution)
        walks = []
        while unvisited:
            start = min(unvisited)
            walk = []
            d = start
            while d in unvisited:
                unvisited.discard(d)
                walk.append(d)
                d = rotation[involution[d]]
            walks.append(walk)
        return walks

    def census(self) -> Census:
        _, _, edges, vertices = self._rotation()
        walks = self.faces()
        connected = nx.is_connected(self.graph()) if self.arcs else False
        return Census(vertices, edges, len(walks), connected, walks)


def is_filling(system: ArcSystem) -> FillingResult:
    """
    Whether the arcs cut the surface into discs.

    The compactified surface has Euler characteristic χ(Σ) + 1; any
    non-disc face raises the count V - E + F above it.
    """
    census = system.census()
    closed_euler = system.surface.euler_characteristic + 1
    filling = census.connected and census.euler == closed_euler
    witness = None
    if not filling and census.face_walks:
        witness = max(census.face_walks, key=len)
    logger.debug("arc system of %d arcs: V=%d E=%d F=%d connected=%s",
                 len(system.arcs), census.vertices, census.edges, census.faces, census.connected)
    return FillingResult(filling, census, witness)


def filling_report(system: ArcSystem) -> dict:
    result = is_filling(system)
    return {
        "arcs": [str(arc) for arc in system.arcs],
        "filling": result.filling,
        "vertices": result.census.vertices,
        "edges": result.census.edges,
        "faces": result.census.faces,
        "connected": result.census.connected,
        "witness_face": result.witness_face,
    }
