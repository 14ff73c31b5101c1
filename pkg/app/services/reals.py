"""Certified real numbers used for volumes, bound right-hand sides and slack.

`EmbeddedReal` is exact: its value is σ_place(w) for an explicit w ∈ K, so every
comparison with a rational is a sign test in K. `ProductReal` covers products of
embeddings at different places (and powers of √|Δ_K|) that cannot be folded into
one field element; it is refined interval-wise and gives up below the configured
comparison width.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from app.config import settings
from app.core.exceptions import UnresolvedComparisonError
from app.services.intervals import CertifiedInterval, sqrt_interval
from app.services.numberfield import FieldElement, embed, format_rational, sign_at

logger = logging.getLogger(__name__)


class CertifiedReal(ABC):
    @abstractmethod
    def enclosure(self, width: Fraction) -> CertifiedInterval:
        """Interval of width <= `width` containing the value."""

    @abstractmethod
    def exact(self) -> Optional[Fraction]:
        """The value when it is a known rational, else None."""

    @abstractmethod
    def affine(self, scale: Fraction, shift: Fraction = Fraction(0)) -> "CertifiedReal":
        """scale * self + shift."""

    def compare(self, value) -> int:
        """Certified sign of self - value."""
        value = Fraction(value)
        exact = self.exact()
        if exact is not None:
            return (exact > value) - (exact < value)
        width = Fraction(1, 16)
        floor = settings.comparison_width
        while True:
            interval = self.enclosure(width) - value
            if interval.excludes_zero():
                return interval.sign()
            if width < floor:
                raise UnresolvedComparisonError(
                    f"comparison against {format_rational(value)} unresolved at width 10^-{settings.COMPARISON_WIDTH_EXPONENT}",
                    value=self.describe(),
                )
            width /= 1024

    def __float__(self) -> float:
        exact = self.exact()
        if exact is not None:
            return float(exact)
        return float(self.enclosure(Fraction(1, 10 ** 15)).midpoint)

    def interval_record(self, digits: Optional[int] = None) -> Tuple[str, str]:
        digits = digits or settings.report_digits
        interval = self.enclosure(Fraction(1, 10 ** digits))
        text = interval.format(digits)
        lo, hi = text[1:-1].split(", ")
        return lo, hi

    def to_record(self, digits: Optional[int] = None) -> dict:
        exact = self.exact()
        if exact is not None:
            return {"exact": format_rational(exact)}
        lo, hi = self.interval_record(digits)
        return {"exact": None, "interval": [lo, hi], "symbolic": self.describe()}

    @abstractmethod
    def describe(self) -> str:
        ...

    def __str__(self) -> str:
        exact = self.exact()
        if exact is not None:
            return format_rational(exact)
        lo, hi = self.interval_record(6)
        return f"{self.describe()} ∈ [{lo}, {hi}]"


class RationalReal(CertifiedReal):
    def __init__(self, value):
        self.value = Fraction(value)

    def enclosure(self, width: Fraction) -> CertifiedInterval:
        return CertifiedInterval.point(self.value)

    def exact(self) -> Optional[Fraction]:
        return self.value

    def affine(self, scale: Fraction, shift: Fraction = Fraction(0)) -> CertifiedReal:
        return RationalReal(self.value * scale + shift)

    def describe(self) -> str:
        return format_rational(self.value)


class EmbeddedReal(CertifiedReal):
    """σ_place(element), exact."""

    def __init__(self, element: FieldElement, place: int):
        self.element = element
        self.place = place

    def enclosure(self, width: Fraction) -> CertifiedInterval:
        return embed(self.element, self.place, width)

    def exact(self) -> Optional[Fraction]:
        if self.element.is_rational():
            return self.element.coords[0]
        return None

    def compare(self, value) -> int:
        return sign_at(self.element - Fraction(value), self.place)

    def affine(self, scale: Fraction, shift: Fraction = Fraction(0)) -> CertifiedReal:
        return EmbeddedReal(self.element * Fraction(scale) + Fraction(shift), self.place)

    def describe(self) -> str:
        return f"v{self.place + 1}({self.element})"


class ProductReal(CertifiedReal):
    """coefficient · ∏ σ_p(w) · radicand^(-radical_power/2) + offset."""

    def __init__(
        self,
        factors: Sequence[Tuple[FieldElement, int]],
        coefficient: Fraction = Fraction(1),
        offset: Fraction = Fraction(0),
        radicand: Fraction = Fraction(1),
        radical_power: int = 0,
    ):
        self.factors = tuple(factors)
        self.coefficient = Fraction(coefficient)
        self.offset = Fraction(offset)
        self.radicand = Fraction(radicand)
        self.radical_power = radical_power

    def enclosure(self, width: Fraction) -> CertifiedInterval:
        inner = width
        while True:
            value = CertifiedInterval.point(self.coefficient)
            for element, place in self.factors:
                value = value * embed(element, place, inner)
            if self.radical_power:
                root = sqrt_interval(self.radicand, inner)
                value = value * root.reciprocal() ** self.radical_power
            value = value + self.offset
            if value.width <= width:
                return value
            inner /= 4

    def exact(self) -> Optional[Fraction]:
        if self.coefficient == 0:
            return self.offset
        return None

    def affine(self, scale: Fraction, shift: Fraction = Fraction(0)) -> CertifiedReal:
        return ProductReal(
            self.factors,
            coefficient=self.coefficient * scale,
            offset=self.offset * scale + shift,
            radicand=self.radicand,
            radical_power=self.radical_power,
        )

    def describe(self) -> str:
        parts = [format_rational(self.coefficient)]
        parts += [f"v{place + 1}({element})" for element, place in self.factors]
        text = "*".join(parts)
        if self.radical_power:
            text += f"/sqrt({format_rational(self.radicand)})^{self.radical_power}"
        if self.offset:
            text += f" + {format_rational(self.offset)}"
        return text


def compare_reals(a: CertifiedReal, b: CertifiedReal) -> int:
    """Certified sign of a - b."""
    b_exact = b.exact()
    if b_exact is not None:
        return a.compare(b_exact)
    a_exact = a.exact()
    if a_exact is not None:
        return -b.compare(a_exact)
    if isinstance(a, EmbeddedReal) and isinstance(b, EmbeddedReal) and a.place == b.place:
        return sign_at(a.element - b.element, a.place)
    width = Fraction(1, 16)
    while True:
        difference = a.enclosure(width) - b.enclosure(width)
        if difference.excludes_zero():
            return difference.sign()
        if width < settings.comparison_width:
            raise UnresolvedComparisonError(
                "comparison of two certified reals unresolved",
                left=a.describe(), right=b.describe(),
            )
        width /= 1024
