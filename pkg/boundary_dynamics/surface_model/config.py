"""
Plain-text surface configuration.

Example (the modular torus):

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
    base_point = 0 1

base_point gives the real part and the squared imaginary part of a point
of the upper half-plane outside every ping-pong region. Blank lines and
lines starting with # are ignored.
"""

import logging
from fractions import Fraction
from typing import Dict

from ..errors import InvariantViolation, SurfaceConfigError, UnsupportedSurface
from ..exact_geometry.moebius import MoebiusMap
from ..exact_geometry.points import parse_point
from ..exact_geometry.tools import CircleInterval
from .surface import SurfaceGroup, invert_letter
from .tools import modular_character

logger = logging.getLogger(__name__)


def _parse_fraction(value: str, line_number: int) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise SurfaceConfigError(line_number, f"expected a rational number, got {value!r}")


def parse_surface(text: str) -> SurfaceGroup:
    generators: Dict[str, MoebiusMap] = {}
    intervals: Dict[str, CircleInterval] = {}
    fields = {}
    lines = {}

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SurfaceConfigError(line_number, "expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        parts = key.split()
        if parts[0] == "generator" and len(parts) == 2:
            letter = parts[1]
            if len(letter) != 1 or not letter.islower():
                raise SurfaceConfigError(line_number, "generator names are single lowercase letters")
            entries = value.split()
            if len(entries) != 4:
                raise SurfaceConfigError(line_number, "a generator needs four integer entries")
            try:
                generators[letter] = MoebiusMap(*(int(entry) for entry in entries))
            except ValueError as error:
                raise SurfaceConfigError(line_number, str(error))
            lines[key] = line_number
        elif parts[0] == "interval" and len(parts) == 2:
            ends = value.split()
            if len(ends) != 2:
                raise SurfaceConfigError(line_number, "an interval needs two endpoints")
            try:
                intervals[parts[1]] = CircleInterval(parse_point(ends[0]), parse_point(ends[1]))
            except ValueError as error:
                raise SurfaceConfigError(line_number, str(error))
        elif key in ("name", "peripheral", "orientation", "cusp_width", "euler_characteristic", "base_point"):
            fields[key] = value
            lines[key] = line_number
        else:
            raise SurfaceConfigError(line_number, f"unknown key {key!r}")

    last_line = max(lines.values(), default=0)
    for required in ("peripheral", "orientation", "cusp_width", "euler_characteristic"):
        if required not in fields:
            raise SurfaceConfigError(last_line, f"missing key {required!r}")
    if not generators:
        raise SurfaceConfigError(last_line, "no generators given")

    letters = set(generators) | {invert_letter(letter) for letter in generators}
    peripheral = fields["peripheral"]
    if any(letter not in letters for letter in peripheral):
        raise SurfaceConfigError(lines["peripheral"], "peripheral word uses unknown letters")
    try:
        orientation = int(fields["orientation"])
        euler = int(fields["euler_characteristic"])
    except ValueError as error:
        raise SurfaceConfigError(last_line, str(error))
    if orientation not in (-1, 1):
        raise SurfaceConfigError(lines["orientation"], "orientation must be 1 or -1")
    if euler != 1 - len(generators) or len(generators) % 2:
        raise UnsupportedSurface("only once-punctured orientable surfaces are supported")

    base_point = (Fraction(0), Fraction(1))
    if "base_point" in fields:
        values = fields["base_point"].split()
        if len(values) != 2:
            raise SurfaceConfigError(lines["base_point"], "base_point needs two rationals")
        base_point = tuple(_parse_fraction(v, lines["base_point"]) for v in values)

    surface = SurfaceGroup(
        name=fields.get("name", "custom surface"),
        generators=generators,
        peripheral_word=peripheral,
        cusp_width=_parse_fraction(fields["cusp_width"], lines["cusp_width"]),
        euler_characteristic=euler,
        orientation_sign=orientation,
        ping_pong=intervals,
        base_point=base_point,
        modular_commutator=_is_modular_commutator(generators, fields["cusp_width"]),
    )
    try:
        return surface.validate()
    except InvariantViolation as error:
        raise SurfaceConfigError(last_line, str(error))


def _is_modular_commutator(generators: Dict[str, MoebiusMap], cusp_width: str) -> bool:
    # a rank-2 one-cusp subgroup of the kernel with cusp width 6 has index 6, so it is the kernel
    return (
        len(generators) == 2
        and cusp_width.strip() == "6"
        and all(modular_character(m) == 0 for m in generators.values())
    )


def load_surface(path: str) -> SurfaceGroup:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as error:
        raise SurfaceConfigError(0, f"cannot read {path}: {error}")
    surface = parse_surface(text)
    logger.info("loaded surface %s from %s", surface.name, path)
    return surface
