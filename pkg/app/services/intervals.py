"""Certified intervals with rational endpoints.

Every operation is outward-conservative: the exact result of the operation on any
values inside the operands lies inside the result. Endpoints are `Fraction`s, so
no rounding happens at all; widths only grow through the interval dependency effect.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class CertifiedInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: Rational) -> "CertifiedInterval":
        value = Fraction(value)
        return cls(value, value)

    @classmethod
    def hull(cls, *values: Rational) -> "CertifiedInterval":
        return cls(Fraction(min(values)), Fraction(max(values)))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def magnitude(self) -> Fraction:
        """Upper bound of |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def contains(self, value: Union[Rational, "CertifiedInterval"]) -> bool:
        if isinstance(value, CertifiedInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        return self.lo <= value <= self.hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def sign(self) -> int:
        """+1 / -1 when certified, 0 when the interval still straddles or touches zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def intersect(self, other: "CertifiedInterval") -> "CertifiedInterval":
        return CertifiedInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def _coerce(self, other) -> "CertifiedInterval":
        if isinstance(other, CertifiedInterval):
            return other
        return CertifiedInterval.point(other)

    def __add__(self, other) -> "CertifiedInterval":
        other = self._coerce(other)
        return CertifiedInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "CertifiedInterval":
        return CertifiedInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> "CertifiedInterval":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CertifiedInterval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CertifiedInterval":
        other = self._coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return CertifiedInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "CertifiedInterval":
        if not self.excludes_zero():
            raise ZeroDivisionError(f"interval [{self.lo}, {self.hi}] contains zero")
        return CertifiedInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "CertifiedInterval":
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "CertifiedInterval":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, exponent: int) -> "CertifiedInterval":
        if exponent < 0:
            return (self ** -exponent).reciprocal()
        result = CertifiedInterval.point(1)
        for _ in range(exponent):
            result = result * self
        return result

    def abs(self) -> "CertifiedInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertifiedInterval(Fraction(0), self.magnitude)

    def format(self, digits: int = 6) -> str:
        scale = 10 ** digits
        lo = Fraction(math.floor(self.lo * scale), scale)
        hi = Fraction(math.ceil(self.hi * scale), scale)
        return f"[{_decimal(lo, digits)}, {_decimal(hi, digits)}]"

    def __str__(self) -> str:
        return self.format()


def _decimal(value: Fraction, digits: int) -> str:
    sign = "-" if value < 0 else ""
    value = abs(value)
    whole = value.numerator // value.denominator
    frac = value - whole
    return f"{sign}{whole}.{int(frac * 10 ** digits):0{digits}d}"


def sqrt_interval(value: Rational, width: Fraction) -> CertifiedInterval:
    """Certified enclosure of the square root of a non-negative rational."""
    value = Fraction(value)
    if value < 0:
        raise ValueError("square root of a negative rational")
    num, den = value.numerator, value.denominator
    root_num, root_den = math.isqrt(num), math.isqrt(den)
    if root_num * root_num == num and root_den * root_den == den:
        return CertifiedInterval.point(Fraction(root_num, root_den))
    lo = Fraction(0)
    hi = max(Fraction(1), value)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if mid * mid <= value:
            lo = mid
        else:
            hi = mid
    return CertifiedInterval(lo, hi)
