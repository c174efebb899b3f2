"""Outward-rounded interval arithmetic over MPFR floats.

Every operation returns an interval guaranteed to contain the exact result:
lower endpoints are computed rounding down, upper endpoints rounding up.
The working mantissa is a process-global setting (default 128 bits), as the
CLI exposes a single --precision knob. Contexts are cached per thread.
"""

from __future__ import annotations

import threading
from fractions import Fraction

import gmpy2

_DEFAULT_PRECISION = 128
_precision = _DEFAULT_PRECISION
_local = threading.local()


def set_precision(bits: int) -> None:
    global _precision
    if bits < 8:
        raise ValueError("precision must be at least 8 bits")
    _precision = int(bits)


def get_precision() -> int:
    return _precision


def _ctxs():
    """(round-down, round-up) contexts at the current precision, per thread."""
    cached = getattr(_local, "ctxs", None)
    if cached is None or cached[0] != _precision:
        down = gmpy2.context(precision=_precision, round=gmpy2.RoundDown)
        up = gmpy2.context(precision=_precision, round=gmpy2.RoundUp)
        cached = (_precision, down, up)
        _local.ctxs = cached
    return cached[1], cached[2]


class Interval:
    """Closed interval [lo, hi] with mpfr endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi
        if not (lo <= hi):
            raise ValueError(f"empty interval [{lo}, {hi}]")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "Interval":
        down, up = _ctxs()
        return Interval(gmpy2.mpfr(n, _precision, down), gmpy2.mpfr(n, _precision, up))

    @staticmethod
    def from_fraction(q) -> "Interval":
        if isinstance(q, int):
            return Interval.from_int(q)
        q = Fraction(q)
        down, up = _ctxs()
        return Interval(gmpy2.mpfr(q, _precision, down), gmpy2.mpfr(q, _precision, up))

    @staticmethod
    def zero() -> "Interval":
        z = gmpy2.mpfr(0)
        return Interval(z, z)

    @staticmethod
    def pi() -> "Interval":
        down, up = _ctxs()
        return Interval(down.const_pi(), up.const_pi())

    @staticmethod
    def hull(items) -> "Interval":
        items = list(items)
        return Interval(min(x.lo for x in items), max(x.hi for x in items))

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            return Interval.from_fraction(other)
        raise TypeError(f"cannot mix Interval with {type(other)!r}")

    def __add__(self, other):
        other = self._coerce(other)
        down, up = _ctxs()
        return Interval(down.add(self.lo, other.lo), up.add(self.hi, other.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = self._coerce(other)
        down, up = _ctxs()
        return Interval(down.sub(self.lo, other.hi), up.sub(self.hi, other.lo))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        down, up = _ctxs()
        pairs = ((self.lo, other.lo), (self.lo, other.hi),
                 (self.hi, other.lo), (self.hi, other.hi))
        return Interval(min(down.mul(a, b) for a, b in pairs),
                        max(up.mul(a, b) for a, b in pairs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.contains_zero():
            raise ZeroDivisionError("interval denominator contains 0")
        down, up = _ctxs()
        pairs = ((self.lo, other.lo), (self.lo, other.hi),
                 (self.hi, other.lo), (self.hi, other.hi))
        return Interval(min(down.div(a, b) for a, b in pairs),
                        max(up.div(a, b) for a, b in pairs))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        """Integer power by repeated squaring (containment-safe)."""
        if not isinstance(n, int) or n < 0:
            raise ValueError("use rational_pow for non-integer exponents")
        result = Interval.from_int(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- elementary functions ---------------------------------------------

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise ValueError("sqrt of an interval with negative part")
        down, up = _ctxs()
        return Interval(down.sqrt(self.lo), up.sqrt(self.hi))

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise ValueError("log of an interval touching (-inf, 0]")
        down, up = _ctxs()
        return Interval(down.log(self.lo), up.log(self.hi))

    def exp(self) -> "Interval":
        down, up = _ctxs()
        return Interval(down.exp(self.lo), up.exp(self.hi))

    def rational_pow(self, q) -> "Interval":
        """self ** q for strictly positive self and rational q."""
        q = Fraction(q)
        if q.denominator == 1:
            e = q.numerator
            if e >= 0:
                return self ** e
            return Interval.from_int(1) / self ** (-e)
        return (self.log() * Interval.from_fraction(q)).exp()

    @staticmethod
    def log_of_int(n: int) -> "Interval":
        """log(n) for an exact (possibly huge) positive integer."""
        if n <= 0:
            raise ValueError("log_of_int needs a positive integer")
        down, up = _ctxs()
        return Interval(down.log(gmpy2.mpfr(n, _precision, down)),
                        up.log(gmpy2.mpfr(n, _precision, up)))

    @staticmethod
    def log_of_fraction(q) -> "Interval":
        q = Fraction(q)
        if q <= 0:
            raise ValueError("log_of_fraction needs a positive rational")
        return Interval.log_of_int(q.numerator) - Interval.log_of_int(q.denominator)

    # -- predicates and accessors ------------------------------------------

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def strictly_less(self, other) -> bool:
        """Certified self < other."""
        other = self._coerce(other)
        return self.hi < other.lo

    def strictly_greater(self, other) -> bool:
        other = self._coerce(other)
        return self.lo > other.hi

    def compare(self, other) -> bool | None:
        """True if certainly <, False if certainly >=, None if undecided."""
        other = self._coerce(other)
        if self.hi < other.lo:
            return True
        if self.lo >= other.hi:
            return False
        return None

    def midpoint(self):
        down, up = _ctxs()
        return up.div(up.add(self.lo, self.hi), gmpy2.mpfr(2))

    def half_width(self):
        _, up = _ctxs()
        return up.div(up.sub(self.hi, self.lo), gmpy2.mpfr(2))

    def width(self):
        _, up = _ctxs()
        return up.sub(self.hi, self.lo)

    def max_with(self, other) -> "Interval":
        other = self._coerce(other)
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(gmpy2.mpfr(0), max(-self.lo, self.hi))

    # -- formatting ----------------------------------------------------------

    def endpoints_decimal(self, digits: int = 40) -> tuple[str, str]:
        """Decimal strings (lo rounded outward-down, hi outward-up).

        Endpoints are widened by one ulp before printing so decimal rounding
        cannot shrink the interval.
        """
        lo = gmpy2.next_below(self.lo) if gmpy2.is_finite(self.lo) else self.lo
        hi = gmpy2.next_above(self.hi) if gmpy2.is_finite(self.hi) else self.hi
        return (format(lo, f".{digits}g"), format(hi, f".{digits}g"))

    def to_json(self) -> dict:
        lo, hi = self.endpoints_decimal()
        return {"lo": lo, "hi": hi}

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def interval_max(items) -> Interval:
    """max over a collection of intervals, as an interval."""
    items = list(items)
    if not items:
        raise ValueError("interval_max of empty collection")
    out = items[0]
    for it in items[1:]:
        out = out.max_with(it)
    return out
