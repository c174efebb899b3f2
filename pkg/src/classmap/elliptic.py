"""Exact rational point arithmetic on y^2 = x^3 + a4*x + a6 over Q.

Chord-tangent group law, integral (A, B, C) normalization of points, Weil
height, secant/tangent lines with primitive integer coefficients, and the
torsion subgroup by the integral-point criterion filtered through the order
bound (torsion orders over Q are 1..10 or 12).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import arith
from .errors import ClassmapError, InputError, VerticalLineError
from .intervals import Interval


@dataclass(frozen=True)
class Curve:
    a4: int
    a6: int

    def __post_init__(self):
        if 4 * self.a4**3 + 27 * self.a6**2 == 0:
            raise InputError(f"curve ({self.a4}, {self.a6}) is singular")

    def discriminant(self) -> int:
        return -16 * (4 * self.a4**3 + 27 * self.a6**2)

    def j_invariant(self) -> Fraction:
        return Fraction(6912 * self.a4**3, 4 * self.a4**3 + 27 * self.a6**2)

    def __str__(self):
        return f"{self.a4},{self.a6}"


def parse_curve(text: str) -> Curve:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"expected 'a4,a6', got {text!r}")
    return Curve(int(parts[0]), int(parts[1]))


@dataclass(frozen=True)
class Point:
    """A rational point: affine (x, y) or the point at infinity (x = y = None)."""

    x: Fraction | None
    y: Fraction | None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        if self.is_infinity:
            return "O"
        return f"{self.x.numerator}/{self.x.denominator},{self.y.numerator}/{self.y.denominator}"


INFINITY = Point(None, None)


def affine(x, y) -> Point:
    return Point(Fraction(x), Fraction(y))


def parse_point(text: str) -> Point:
    if text in ("O", "inf", "infinity"):
        return INFINITY
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"expected 'x,y' with rational entries, got {text!r}")
    return affine(Fraction(parts[0]), Fraction(parts[1]))


def on_curve(curve: Curve, p: Point) -> bool:
    if p.is_infinity:
        return True
    return p.y * p.y == p.x**3 + curve.a4 * p.x + curve.a6


def _require_on_curve(curve: Curve, *points: Point) -> None:
    for p in points:
        if not on_curve(curve, p):
            raise InputError(f"point {p} is not on y^2 = x^3 + {curve.a4}x + {curve.a6}")


def neg(p: Point) -> Point:
    if p.is_infinity:
        return p
    return Point(p.x, -p.y)


def _add_raw(curve: Curve, p: Point, q: Point) -> Point:
    """Chord-tangent addition without on-curve validation of the inputs."""
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    if p.x == q.x:
        if p.y == -q.y:
            return INFINITY
        slope = (3 * p.x * p.x + curve.a4) / (2 * p.y)
    else:
        slope = (q.y - p.y) / (q.x - p.x)
    x3 = slope * slope - p.x - q.x
    y3 = slope * (p.x - x3) - p.y
    return Point(x3, y3)


def add(curve: Curve, p: Point, q: Point) -> Point:
    """Chord-tangent addition; infinity is the identity."""
    _require_on_curve(curve, p, q)
    return _add_raw(curve, p, q)


def scalar_mul(curve: Curve, k: int, p: Point) -> Point:
    """[k]P by double-and-add; [-k]P = -[k]P."""
    _require_on_curve(curve, p)
    if k < 0:
        k, p = -k, neg(p)
    result = INFINITY
    base = p
    while k:
        if k & 1:
            result = _add_raw(curve, result, base)
        base = _add_raw(curve, base, base)
        k >>= 1
    return result


# ---------------------------------------------------------------------------
# integral normalization and heights


@dataclass(frozen=True)
class CanonicalRep:
    """P = (A/C^2, B/C^3) with gcd(A, C) = gcd(B, C) = 1 and C > 0."""

    a: int
    b: int
    c: int


def canonical_rep(p: Point) -> CanonicalRep:
    if p.is_infinity:
        raise InputError("point at infinity has no (A, B, C) normalization")
    den_x = p.x.denominator
    c = math.isqrt(den_x)
    if c * c != den_x:
        raise InputError(f"x-denominator {den_x} is not a perfect square")
    if p.y.denominator != c**3:
        raise InputError("y-denominator is not the cube of the x-denominator root")
    rep = CanonicalRep(p.x.numerator, p.y.numerator, c)
    assert math.gcd(rep.a, rep.c) == 1 and math.gcd(rep.b, rep.c) == 1
    return rep


def weil_height(p: Point) -> Interval:
    """h_W(P) = log max(|A|, C^2); 0 for the point at infinity (convention)."""
    if p.is_infinity:
        return Interval.zero()
    rep = canonical_rep(p)
    return Interval.log_of_int(max(abs(rep.a), rep.c * rep.c, 1))


def naive_height_int(p: Point) -> int:
    """H(P) = max(|A|, C^2) as an exact integer (1 for infinity)."""
    if p.is_infinity:
        return 1
    rep = canonical_rep(p)
    return max(abs(rep.a), rep.c * rep.c, 1)


# ---------------------------------------------------------------------------
# lines


@dataclass(frozen=True)
class Line:
    """l*y = m*x + n with integer coefficients, gcd(l, m, n) = 1, l > 0."""

    l: int
    m: int
    n: int

    def contains(self, p: Point) -> bool:
        if p.is_infinity:
            return False
        return self.l * p.y == self.m * p.x + self.n


def secant_line(curve: Curve, p1: Point, p2: Point) -> Line:
    """The line through p1, p2 (tangent if equal); error if vertical."""
    _require_on_curve(curve, p1, p2)
    if p1.is_infinity or p2.is_infinity:
        raise InputError("secant line requires two affine points")
    if p1.x == p2.x:
        if p1.y != p2.y or p1.y == 0:
            raise VerticalLineError("vertical line; triple contains infinity")
        slope = (3 * p1.x * p1.x + curve.a4) / (2 * p1.y)
    else:
        slope = (p2.y - p1.y) / (p2.x - p1.x)
    intercept = p1.y - slope * p1.x
    scale = math.lcm(slope.denominator, intercept.denominator)
    l, m, n = scale, int(slope * scale), int(intercept * scale)
    g = math.gcd(math.gcd(l, m), n)
    line = Line(l // g, m // g, n // g)
    assert line.contains(p1) and line.contains(p2)
    return line


# ---------------------------------------------------------------------------
# torsion


@dataclass(frozen=True)
class TorsionSubgroup:
    points: tuple[Point, ...]
    structure: str  # Mazur tag: "trivial", "Z/6", "Z/2xZ/2", ...
    a0: int | None  # max A over affine torsion points, None if torsion is trivial

    @property
    def order(self) -> int:
        return len(self.points)


def point_order(curve: Curve, p: Point, bound: int = 12) -> int | None:
    """Exact order if <= bound, else None."""
    _require_on_curve(curve, p)
    if p.is_infinity:
        return 1
    q = p
    for n in range(2, bound + 2):
        q = _add_raw(curve, q, p)
        if q.is_infinity:
            return n
    return None


def is_torsion(curve: Curve, p: Point) -> bool:
    """Exact torsion test: integrality prefilter, then the order bound.

    Rational torsion on an integral short Weierstrass model is integral with
    y = 0 or y^2 dividing 4*a4^3 + 27*a6^2, so almost all points exit in O(1).
    """
    if p.is_infinity:
        return True
    if p.x.denominator != 1 or p.y.denominator != 1:
        return False
    if p.y != 0:
        disc_cubic = 4 * curve.a4**3 + 27 * curve.a6**2
        if disc_cubic % int(p.y) ** 2 != 0:
            return False
    return point_order(curve, p) is not None


def _integer_roots_cubic(a4: int, const: int) -> list[int]:
    """Integer roots of x^3 + a4*x + const."""
    if const == 0:
        roots = [0]
        if a4 < 0:
            r = math.isqrt(-a4)
            if r * r == -a4:
                roots.extend([r, -r])
        return roots
    roots = []
    for d in arith.divisors_from_factorization(arith.factorize(const)):
        for x in (d, -d):
            if x**3 + a4 * x + const == 0:
                roots.append(x)
    return roots


@lru_cache(maxsize=256)
def _torsion_cached(a4: int, a6: int) -> TorsionSubgroup:
    curve = Curve(a4, a6)
    disc_cubic = abs(4 * a4**3 + 27 * a6**2)
    candidates: set[Point] = set()
    for x in _integer_roots_cubic(a4, a6):
        candidates.add(affine(x, 0))
    fac = arith.factorize(disc_cubic)
    half = {p: e // 2 for p, e in fac.items() if e >= 2}
    for y in arith.divisors_from_factorization(half):
        for x in _integer_roots_cubic(a4, a6 - y * y):
            candidates.add(affine(x, y))
            candidates.add(affine(x, -y))
    points = [INFINITY]
    for p in candidates:
        if point_order(curve, p) is not None:
            points.append(p)
    n = len(points)
    two_torsion = sum(1 for p in points if not p.is_infinity and p.y == 0)
    if two_torsion == 3:
        if n % 4 or n > 16:
            raise ClassmapError(f"torsion order {n} with full 2-torsion is impossible")
        structure = f"Z/2xZ/{n // 2}" if n > 4 else "Z/2xZ/2"
    elif n == 1:
        structure = "trivial"
    else:
        if n == 11 or n > 12:
            raise ClassmapError(f"cyclic torsion order {n} is impossible over Q")
        structure = f"Z/{n}"
    affine_points = [p for p in points if not p.is_infinity]
    a0 = max(int(p.x) for p in affine_points) if affine_points else None
    key = lambda p: (1, 0, 0) if p.is_infinity else (0, p.x, p.y)
    return TorsionSubgroup(points=tuple(sorted(points, key=key)),
                           structure=structure, a0=a0)


def torsion_subgroup(curve: Curve) -> TorsionSubgroup:
    """All rational torsion points, the group tag, and A0 = max{A : (A,B) torsion}."""
    return _torsion_cached(curve.a4, curve.a6)
