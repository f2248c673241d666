"""
Exact points of the boundary circle C = R ∪ {∞}.

A point is one of:
    Fraction      -- a rational number in lowest terms
    INF           -- the point at infinity
    Surd          -- (u + v*sqrt(d))/w with d square-free, v != 0
    IntervalReal  -- a rational enclosure that can be refined on demand

Comparisons among the first three kinds are exact. Comparisons involving
an IntervalReal raise UnresolvedPrecision while the enclosure still
straddles the other operand.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import mpmath
from sympy import factorint

from ..errors import UnresolvedPrecision

logger = logging.getLogger(__name__)


class Infinity:
    """The single point at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def surd_sign(p: Fraction, q: Fraction, d: int) -> int:
    """Sign of p + q*sqrt(d) for d > 0 not a perfect square."""
    sp, sq = _sign(p), _sign(q)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: the larger magnitude wins
    return sp if p * p > q * q * d else sq


def _sign_two_radicals(p: Fraction, q: Fraction, d1: int, r: Fraction, d2: int) -> int:
    """Sign of p + q*sqrt(d1) + r*sqrt(d2) with d1 != d2 both square-free."""
    s_head = surd_sign(p, q, d1)
    s_tail = _sign(r)
    if s_tail == 0:
        return s_head
    if s_head == 0 or s_head == s_tail:
        return s_tail
    # compare (p + q*sqrt(d1))^2 with r^2*d2
    bigger = surd_sign(p * p + q * q * d1 - r * r * d2, 2 * p * q, d1)
    return s_head if bigger > 0 else s_tail


@lru_cache(maxsize=4096)
def square_free_split(d: int) -> Tuple[int, int]:
    """Write d = outside**2 * inside with inside square-free."""
    outside, inside = 1, 1
    for prime, exponent in factorint(d).items():
        outside *= prime ** (exponent // 2)
        if exponent % 2:
            inside *= prime
    return outside, inside


@dataclass(frozen=True)
class Surd:
    """The real quadratic irrational (u + v*sqrt(d))/w in canonical form."""

    u: int
    v: int
    d: int
    w: int

    def __post_init__(self):
        if self.w <= 0 or self.v == 0 or self.d <= 1:
            raise ValueError(f"non-canonical surd {self.u},{self.v},{self.d},{self.w}")
        if math.gcd(math.gcd(self.u, self.v), self.w) != 1:
            raise ValueError("surd coefficients share a common factor")
        if square_free_split(self.d)[0] != 1:
            raise ValueError(f"radicand {self.d} is not square-free")

    @property
    def p(self) -> Fraction:
        return Fraction(self.u, self.w)

    @property
    def q(self) -> Fraction:
        return Fraction(self.v, self.w)

    def conjugate(self) -> "Surd":
        return Surd(self.u, -self.v, self.d, self.w)

    def __neg__(self):
        return Surd(-self.u, -self.v, self.d, self.w)

    def __add__(self, other):
        p, q = _field_parts(other, self.d)
        return make_surd(self.p + p, self.q + q, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        p, q = _field_parts(other, self.d)
        return make_surd(self.p - p, self.q - q, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p, q = _field_parts(other, self.d)
        return make_surd(self.p * p + self.q * q * self.d, self.p * q + self.q * p, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p, q = _field_parts(other, self.d)
        norm = p * p - q * q * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero in a quadratic field")
        # multiply through by the conjugate of the divisor
        return make_surd((self.p * p - self.q * q * self.d) / norm,
                         (self.q * p - self.p * q) / norm, self.d)

    def __rtruediv__(self, other):
        p, q = _field_parts(other, self.d)
        norm = self.p * self.p - self.q * self.q * self.d
        return make_surd((p * self.p - q * self.q * self.d) / norm, (q * self.p - p * self.q) / norm, self.d)

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __float__(self):
        return float(to_mpf(self))

    def __str__(self):
        return format_point(self)


def make_surd(p, q, d: int):
    """Return p + q*sqrt(d) as a Fraction when rational, else as a canonical Surd."""
    p, q = Fraction(p), Fraction(q)
    if d < 0:
        raise ValueError("negative radicand")
    if q == 0 or d == 0:
        return p
    outside, inside = square_free_split(d)
    q *= outside
    if inside == 1:
        return p + q
    w = p.denominator * q.denominator // math.gcd(p.denominator, q.denominator)
    u, v = int(p * w), int(q * w)
    g = math.gcd(math.gcd(u, v), w)
    return Surd(u // g, v // g, inside, w // g)


def _field_parts(x, d: int) -> Tuple[Fraction, Fraction]:
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0)
    if isinstance(x, Surd):
        if x.d != d:
            raise TypeError(f"surds over sqrt({x.d}) and sqrt({d}) do not share a field")
        return x.p, x.q
    raise TypeError(f"unsupported operand {x!r}")


@dataclass(frozen=True)
class IntervalReal:
    """
    A real number known through a closed rational enclosure [lo, hi].

    refine, when present, returns a strictly tighter IntervalReal for the
    same number. Every predicate answered at one enclosure stays valid for
    all refinements.
    """

    lo: Fraction
    hi: Fraction
    refine: Optional[Callable[[], "IntervalReal"]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refined(self) -> "IntervalReal":
        if self.refine is None:
            raise UnresolvedPrecision(f"enclosure [{self.lo}, {self.hi}] cannot be refined")
        return self.refine()

    def __lt__(self, other):
        return compare(self, other) < 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __float__(self):
        return float(self.midpoint)

    def __str__(self):
        return format_point(self)


Point = Union[Fraction, Infinity, Surd, IntervalReal]


def is_exact(x) -> bool:
    return not isinstance(x, IntervalReal)


def _parts(x) -> Tuple[Fraction, Fraction, int]:
    if isinstance(x, Surd):
        return x.p, x.q, x.d
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0), 1
    raise TypeError(f"not a finite exact point: {x!r}")


def compare(x, y) -> int:
    """
    Linear comparison of two finite points: -1, 0 or 1.

    Raises:
        TypeError: either point is INF
        UnresolvedPrecision: an enclosure overlaps the other operand
    """
    if x is INF or y is INF:
        raise TypeError("infinity has no position on the real line")
    if isinstance(x, IntervalReal) or isinstance(y, IntervalReal):
        return _compare_enclosure(x, y)
    px, qx, dx = _parts(x)
    py, qy, dy = _parts(y)
    if qy == 0:
        return surd_sign(px - py, qx, dx)
    if qx == 0:
        return surd_sign(px - py, -qy, dy)
    if dx == dy:
        return surd_sign(px - py, qx - qy, dx)
    return _sign_two_radicals(px - py, qx, dx, -qy, dy)


def _compare_enclosure(x, y) -> int:
    if x is y:
        return 0
    if not isinstance(x, IntervalReal):
        return -_compare_enclosure(y, x)
    if isinstance(y, IntervalReal):
        if x.hi < y.lo:
            return -1
        if x.lo > y.hi:
            return 1
        raise UnresolvedPrecision(f"[{x.lo}, {x.hi}] overlaps [{y.lo}, {y.hi}]")
    if compare(x.hi, y) < 0:
        return -1
    if compare(x.lo, y) > 0:
        return 1
    raise UnresolvedPrecision(f"[{x.lo}, {x.hi}] contains {format_point(y)}")


def same_point(x, y) -> bool:
    if x is INF or y is INF:
        return x is y
    return compare(x, y) == 0


def negate(x):
    """Image of x under the reflection z -> -z."""
    if x is INF:
        return INF
    if isinstance(x, IntervalReal):
        refine = None
        if x.refine is not None:
            refine = lambda: negate(x.refined())
        return IntervalReal(-x.hi, -x.lo, refine)
    return -x


def subtract(x, y):
    """Exact x - y when both live in one quadratic field, else an mpf."""
    try:
        if isinstance(x, Surd) or isinstance(y, Surd):
            d = x.d if isinstance(x, Surd) else y.d
            px, qx = _field_parts(x, d)
            py, qy = _field_parts(y, d)
            return make_surd(px - py, qx - qy, d)
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            return x - y
    except TypeError:
        pass
    return to_mpf(x) - to_mpf(y)


def to_mpf(x) -> mpmath.mpf:
    if x is INF:
        return mpmath.inf
    if isinstance(x, Surd):
        return (mpmath.mpf(x.u) + x.v * mpmath.sqrt(x.d)) / x.w
    if isinstance(x, IntervalReal):
        x = x.midpoint
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


_SURD_RE = re.compile(
    r"^\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*(?:/\s*(\d+))?$"
)
_RATIONAL_RE = re.compile(r"^[+-]?\d+(\s*/\s*\d+)?$")
_ENCLOSURE_RE = re.compile(r"^\[\s*([^,\]]+)\s*,\s*([^\]]+)\]$")


def parse_point(text: str):
    """
    Parse the exact string forms "n/d", "inf", "(u+v*sqrt(d))/w" and "[lo,hi]".

    Decimals such as "0.3819" become an IntervalReal enclosing every real
    that rounds to them.
    """
    raw = text.strip()
    if raw.lower() in ("inf", "infinity", "oo", "∞"):
        return INF
    match = _SURD_RE.match(raw)
    if match:
        u, sign, v, d, w = match.groups()
        v = int(v) if sign == "+" else -int(v)
        return make_surd(Fraction(int(u), int(w or 1)), Fraction(v, int(w or 1)), int(d))
    if _RATIONAL_RE.match(raw):
        try:
            return Fraction(raw.replace(" ", ""))
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {text!r}")
    match = _ENCLOSURE_RE.match(raw)
    if match:
        return IntervalReal(Fraction(match.group(1).strip()), Fraction(match.group(2).strip()))
    try:
        value = Decimal(raw)
    except InvalidOperation:
        raise ValueError(f"cannot parse boundary point {text!r}")
    if not value.is_finite():
        raise ValueError(f"cannot parse boundary point {text!r}")
    places = max(0, -value.as_tuple().exponent)
    center = Fraction(value)
    half = Fraction(5, 10 ** (places + 1))
    return IntervalReal(center - half, center + half)


def format_point(x) -> str:
    if x is INF:
        return "inf"
    if isinstance(x, Surd):
        sign = "+" if x.v > 0 else "-"
        return f"({x.u}{sign}{abs(x.v)}*sqrt({x.d}))/{x.w}"
    if isinstance(x, IntervalReal):
        return f"[{x.lo},{x.hi}]"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def mpf_to_fraction(value: mpmath.mpf) -> Fraction:
    """The exact binary rational held by a finite mpf."""
    sign, mantissa, exponent, _ = mpmath.mpf(value)._mpf_
    magnitude = Fraction(int(mantissa)) * Fraction(2) ** int(exponent)
    return -magnitude if sign else magnitude


def rational_bounds(x, precision: int = 50) -> Tuple[Fraction, Fraction]:
    """Rationals lo < x < hi within about 10^-precision of an exact finite point."""
    if isinstance(x, IntervalReal):
        return x.lo, x.hi
    if not isinstance(x, Surd):
        x = Fraction(x)
        step = Fraction(1, 10 ** precision)
        return x - step, x + step
    with mpmath.workdps(precision + 10):
        center = mpf_to_fraction(to_mpf(x))
    step = Fraction(1, 10 ** precision)
    lo, hi = center - step, center + step
    while compare(lo, x) >= 0:
        lo -= step
    while compare(hi, x) <= 0:
        hi += step
    return lo, hi
