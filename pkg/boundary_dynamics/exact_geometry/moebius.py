"""
Integer Möbius maps z -> (a z + b)/(c z + d) with ad - bc = 1, taken up to sign.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Tuple, Union

import mpmath

from ..errors import EllipticInput, IdentityInput, InvariantViolation, NotHyperbolic, UnresolvedPrecision
from .points import INF, Infinity, IntervalReal, Surd, make_surd, surd_sign

logger = logging.getLogger(__name__)


class MapType(Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class MoebiusMap:
    """
    Element of PSL(2, Z).

    The stored sign is canonical: the first nonzero entry of (a, b, c, d)
    is positive, so two maps are equal exactly when their fields are.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")
        first = next(entry for entry in (self.a, self.b, self.c, self.d) if entry != 0)
        if first < 0:
            for name in ("a", "b", "c", "d"):
                object.__setattr__(self, name, -getattr(self, name))

    @classmethod
    def from_rows(cls, rows) -> "MoebiusMap":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def trace(self) -> int:
        return self.a + self.d

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "MoebiusMap":
        base = self if n >= 0 else self.inverse()
        result = MoebiusMap.identity()
        for _ in range(abs(n)):
            result = compose(result, base)
        return result

    def __call__(self, x):
        return apply(self, x)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def compose(m: MoebiusMap, n: MoebiusMap) -> MoebiusMap:
    """Matrix product m n, i.e. the map z -> m(n(z))."""
    return MoebiusMap(
        m.a * n.a + m.b * n.c,
        m.a * n.b + m.b * n.d,
        m.c * n.a + m.d * n.c,
        m.c * n.b + m.d * n.d,
    )


def classify(m: MoebiusMap) -> MapType:
    if m.is_identity():
        return MapType.IDENTITY
    trace = abs(m.trace)
    if trace == 2:
        return MapType.PARABOLIC
    if trace > 2:
        return MapType.HYPERBOLIC
    return MapType.ELLIPTIC


def apply(m: MoebiusMap, x):
    """
    Image of a boundary point.

    An IntervalReal maps to the enclosure of its image; the enclosure must
    not contain the pole -d/c, otherwise UnresolvedPrecision is raised.
    """
    if x is INF:
        return INF if m.c == 0 else Fraction(m.a, m.c)
    if isinstance(x, Surd):
        return (m.a * x + m.b) / (m.c * x + m.d)
    if isinstance(x, IntervalReal):
        return _apply_enclosure(m, x)
    x = Fraction(x)
    denominator = m.c * x + m.d
    if denominator == 0:
        return INF
    return (m.a * x + m.b) / denominator


def _apply_enclosure(m: MoebiusMap, x: IntervalReal) -> IntervalReal:
    if m.c != 0:
        pole = Fraction(-m.d, m.c)
        if x.lo <= pole <= x.hi:
            raise UnresolvedPrecision(f"enclosure [{x.lo}, {x.hi}] contains the pole {pole}")
    ends = sorted((apply(m, x.lo), apply(m, x.hi)))
    refine = None
    if x.refine is not None:
        refine = lambda: _apply_enclosure(m, x.refined())
    return IntervalReal(ends[0], ends[1], refine)


def derivative_exceeds_one(m: MoebiusMap, z) -> bool:
    """Whether |m'(z)| < 1 fails, i.e. |c z + d| <= 1, for a finite exact z."""
    shift = m.c * z + m.d
    if isinstance(shift, Surd):
        square = shift * shift - 1
        if isinstance(square, Surd):
            return surd_sign(square.p, square.q, square.d) <= 0
        return square <= 0
    return abs(shift) <= 1


def fixed_points(m: MoebiusMap) -> Union[Tuple[Surd, Surd], Fraction, Infinity]:
    """
    Fixed points of a parabolic or hyperbolic map.

    Returns:
        (attracting, repelling) for a hyperbolic map, the single fixed point
        for a parabolic one.

    Raises:
        IdentityInput, EllipticInput
    """
    kind = classify(m)
    if kind is MapType.IDENTITY:
        raise IdentityInput("the identity fixes every point")
    if kind is MapType.ELLIPTIC:
        raise EllipticInput(f"{m} is elliptic")
    if kind is MapType.PARABOLIC:
        if m.c == 0:
            return INF
        return Fraction(m.a - m.d, 2 * m.c)

    # integer hyperbolic maps always have c != 0 and a non-square discriminant
    discriminant = m.trace * m.trace - 4
    sign = 1 if m.trace > 0 else -1
    base = Fraction(m.a - m.d, 2 * m.c)
    radical = Fraction(1, 2 * m.c)
    attracting = make_surd(base, sign * radical, discriminant)
    repelling = make_surd(base, -sign * radical, discriminant)
    if derivative_exceeds_one(m, attracting) or not derivative_exceeds_one(m, repelling):
        raise InvariantViolation(f"fixed point labels of {m} are inconsistent")
    return attracting, repelling


def translation_length(m: MoebiusMap, precision: int = 50) -> mpmath.mpf:
    """Hyperbolic translation length 2 arccosh(|tr|/2)."""
    if classify(m) is not MapType.HYPERBOLIC:
        raise NotHyperbolic(f"{m} has no axis")
    with mpmath.workdps(precision):
        return 2 * mpmath.acosh(mpmath.mpf(abs(m.trace)) / 2)
