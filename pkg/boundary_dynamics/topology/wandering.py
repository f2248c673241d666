"""
Wandering certificates.

Once an initial segment of the derived arcs of x fills the surface, any
mapping class sending the agreement neighborhood U into itself would fix
each of those arcs and so be trivial. The certificate records that prefix,
the arrangement census proving it fills, U, and for each sampled
nontrivial class the exact check that φU misses U.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from ..errors import DisjointnessFailure, IoFailure, NotFillingWithinDepth, StepBudgetExceeded
from ..exact_geometry.points import format_point, parse_point
from ..exact_geometry.tools import CircleInterval, intervals_disjoint
from ..loop_cutting.expansion import DerivedExpansion, Terminal, agreement_neighborhood, derived_expansion
from ..surface_model.surface import SurfaceGroup
from .action import image_neighborhood
from .arcs import ArcSystem, Census, is_filling
from .mapping_class import MappingClass, enumerate_mapping_classes, identity_class

logger = logging.getLogger(__name__)


@dataclass
class ClassVerdict:
    mapping_class: MappingClass
    image: CircleInterval
    disjoint: bool


@dataclass
class WanderingCertificate:
    x: object
    n: int
    expansion: DerivedExpansion
    arcs: ArcSystem
    census: Census
    neighborhood: CircleInterval
    verdicts: List[ClassVerdict] = field(default_factory=list)

    @property
    def steps(self) -> List[Tuple]:
        return [(step.g, step.epsilon) for step in self.expansion.steps[:self.n]]


def first_filling_prefix(surface: SurfaceGroup, expansion: DerivedExpansion, depth: int = 4096):
    """The least n whose first n derived arcs fill, with the arc system and its census."""
    for n in range(1, len(expansion.steps) + 1):
        system = ArcSystem.from_expansion(surface, expansion, n, depth)
        result = is_filling(system)
        if result.filling:
            return n, system, result.census
    return None


def check_classes(surface: SurfaceGroup, steps, neighborhood: CircleInterval, classes: List[MappingClass],
                  precision: int = 50) -> List[ClassVerdict]:
    verdicts = []
    for phi in classes:
        image = image_neighborhood(surface, phi, steps, neighborhood, precision=precision)
        disjoint = intervals_disjoint(neighborhood, image)
        if not disjoint:
            raise DisjointnessFailure(f"{phi} moves {neighborhood} onto {image}", mapping_class=phi)
        verdicts.append(ClassVerdict(phi, image, disjoint))
    return verdicts


def wandering_certificate(surface: SurfaceGroup, x, depth: int = 32, bound: int = 4, cutting_depth: int = 4096,
                          precision: int = 50, classes: Optional[List[MappingClass]] = None,
                          **expansion_options) -> WanderingCertificate:
    """
    Certify that x has a neighborhood moved off itself by every sampled nontrivial class.

    Raises:
        NotFillingWithinDepth: no prefix of at most depth derived arcs fills
        DisjointnessFailure: some class φ has φU ∩ U nonempty
    """
    try:
        expansion = derived_expansion(surface, x, max_steps=depth, depth=cutting_depth, **expansion_options)
    except StepBudgetExceeded as e:
        raise NotFillingWithinDepth(str(e)) from e
    found = first_filling_prefix(surface, expansion, cutting_depth)
    if found is None:
        reason = "its expansion lands in R" if expansion.terminal is Terminal.LANDED_IN_R else "no prefix fills"
        raise NotFillingWithinDepth(
            f"{format_point(x)}: {reason} within {len(expansion.steps)} of {depth} steps"
        )
    n, system, census = found
    neighborhood = agreement_neighborhood(expansion, n)
    if classes is None:
        classes = enumerate_mapping_classes(surface, bound)
    certificate = WanderingCertificate(x, n, expansion, system, census, neighborhood)
    certificate.verdicts = check_classes(surface, certificate.steps, neighborhood, classes, precision)
    logger.info("certified %s: %d arcs fill, %d classes move U off itself", format_point(x), n, len(classes))
    return certificate


def certificate_record(certificate: WanderingCertificate) -> dict:
    return {
        "x": format_point(certificate.x),
        "n": certificate.n,
        "steps": [{"word": g.word, "epsilon": epsilon} for g, epsilon in certificate.steps],
        "arcs": [str(arc) for arc in certificate.arcs.arcs],
        "census": {
            "vertices": certificate.census.vertices,
            "edges": certificate.census.edges,
            "faces": certificate.census.faces,
            "connected": certificate.census.connected,
        },
        "neighborhood": [format_point(certificate.neighborhood.left), format_point(certificate.neighborhood.right)],
        "classes": [
            {
                "name": verdict.mapping_class.name,
                "images": list(verdict.mapping_class.images),
                "inverse_images": list(verdict.mapping_class.inverse_images),
                "orientation": verdict.mapping_class.orientation,
                "image": [format_point(verdict.image.left), format_point(verdict.image.right)],
                "disjoint": verdict.disjoint,
            }
            for verdict in certificate.verdicts
        ],
    }


def write_certificate(certificate: WanderingCertificate, path) -> Path:
    path = Path(path)
    try:
        with open(path, "w") as f:
            json.dump(certificate_record(certificate), f, indent=2)
    except OSError as e:
        raise IoFailure(f"cannot write certificate {path}: {e}") from e
    return path


def read_certificate(path) -> dict:
    path = Path(path)
    try:
        with open(path, "r") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise IoFailure(f"cannot read certificate {path}: {e}") from e


def verify_certificate_record(surface: SurfaceGroup, record: dict, precision: int = 50) -> bool:
    """
    Re-check a certificate record from its stored words alone.

    The neighborhood is rebuilt from the recorded (g_i, ε_i) and must match
    the stored one; every recorded class must still move it off itself.
    """
    steps = [(surface.element(item["word"]), item["epsilon"]) for item in record["steps"]]
    identity = identity_class()
    stored = CircleInterval(*(parse_point(text) for text in record["neighborhood"]))
    rebuilt = image_neighborhood(surface, identity, steps, stored, precision=precision)
    if rebuilt != stored:
        logger.warning("recorded neighborhood %s differs from rebuilt %s", stored, rebuilt)
        return False
    for entry in record["classes"]:
        phi = MappingClass(tuple(entry["images"]), tuple(entry["inverse_images"]), entry["orientation"],
                           True, entry.get("name", ""))
        image = image_neighborhood(surface, phi, steps, stored, precision=precision)
        if not intervals_disjoint(stored, image):
            logger.warning("class %s fails disjointness", phi)
            return False
    return True


def filling_density(surface: SurfaceGroup, points, depth: int = 16, cutting_depth: int = 4096,
                    **expansion_options) -> dict:
    """Fraction of the sampled points whose first derived arcs fill within depth steps."""
    filling = 0
    prefixes = []
    for x in points:
        try:
            expansion = derived_expansion(surface, x, max_steps=depth, depth=cutting_depth, **expansion_options)
        except StepBudgetExceeded:
            prefixes.append(None)
            continue
        found = first_filling_prefix(surface, expansion, cutting_depth)
        prefixes.append(found[0] if found else None)
        if found:
            filling += 1
    total = len(prefixes)
    logger.info("%d of %d sampled points fill within %d steps", filling, total, depth)
    return {
        "samples": total,
        "filling": filling,
        "fraction": filling / total if total else 0.0,
        "prefixes": prefixes,
    }
