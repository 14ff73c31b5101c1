"""Monogenic number fields K = ℚ(θ) with certified real embeddings.

Elements are stored in the power basis 1, θ, ..., θ^(d-1) with `Fraction`
coordinates. Real places are numbered from 0 in order of decreasing root, so
place 0 sends θ to the largest real root of the minimal polynomial.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import ceil, isqrt
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Poly, Symbol, gcd

from app.config import settings
from app.core.exceptions import DegenerateError, InvalidFieldError, NotTotallyRealError
from app.services import linalg
from app.services.intervals import CertifiedInterval

logger = logging.getLogger(__name__)

_t = Symbol("t")

Scalar = Union[int, Fraction]


def _to_fraction(value) -> Fraction:
    """sympy Rational (or int / Fraction) to Fraction."""
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class NumberField:
    min_poly: Tuple[int, ...]  # constant term first, monic
    degree: int
    signature: Tuple[int, int]
    discriminant: int
    root_isolations: Tuple[CertifiedInterval, ...]
    complex_boxes: Tuple[Tuple[CertifiedInterval, CertifiedInterval], ...] = ()
    class_number_one: bool = True

    @property
    def r(self) -> int:
        return self.signature[0]

    @property
    def s(self) -> int:
        return self.signature[1]

    @property
    def is_totally_real(self) -> bool:
        return self.signature[1] == 0

    @property
    def label(self) -> str:
        return "Q" if self.degree == 1 else f"Q[t]/({_poly_str(self.min_poly)})"

    def require_totally_real(self, operation: str) -> None:
        if not self.is_totally_real:
            raise NotTotallyRealError(
                f"{operation} needs a totally real field", field=self.label, signature=self.signature
            )

    def poly_value(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.min_poly):
            acc = acc * x + c
        return acc

    def root_interval(self, place: int, level: int) -> CertifiedInterval:
        """Isolating interval of the root at `place`, bisected `level` times."""
        return _root_ladder(self, place).at(level)

    def power(self, k: int) -> Tuple[Fraction, ...]:
        """Power-basis coordinates of θ^k."""
        return _power(self, k)

    def element(self, coords: Sequence[Scalar]) -> "FieldElement":
        return FieldElement(self, coords)

    def scalar(self, value: Scalar) -> "FieldElement":
        return FieldElement(self, [value] + [0] * (self.degree - 1))

    @property
    def theta(self) -> "FieldElement":
        if self.degree == 1:
            return self.scalar(-self.min_poly[0])
        return FieldElement(self, self.power(1))

    @property
    def zero(self) -> "FieldElement":
        return self.scalar(0)

    @property
    def one(self) -> "FieldElement":
        return self.scalar(1)

    def cauchy_bound(self) -> Fraction:
        """Upper bound on the modulus of every root of the minimal polynomial."""
        return 1 + max((abs(Fraction(c)) for c in self.min_poly[:-1]), default=Fraction(0))


class _RootLadder:
    """Append-only bisection ladder for one real root; level k nests in level k-1."""

    def __init__(self, field: NumberField, place: int):
        self._poly_value = field.poly_value
        self._levels: List[CertifiedInterval] = [field.root_isolations[place]]
        self._lock = threading.Lock()

    def at(self, level: int) -> CertifiedInterval:
        if level < len(self._levels):
            return self._levels[level]
        with self._lock:
            while len(self._levels) <= level:
                self._levels.append(self._bisect(self._levels[-1]))
        return self._levels[level]

    def _bisect(self, interval: CertifiedInterval) -> CertifiedInterval:
        if interval.width == 0:
            return interval
        mid = interval.midpoint
        at_mid = self._poly_value(mid)
        if at_mid == 0:
            return CertifiedInterval.point(mid)
        at_lo = self._poly_value(interval.lo)
        if at_lo == 0:
            return CertifiedInterval.point(interval.lo)
        if (at_lo < 0) != (at_mid < 0):
            return CertifiedInterval(interval.lo, mid)
        return CertifiedInterval(mid, interval.hi)


@lru_cache(maxsize=None)
def _root_ladder(field: NumberField, place: int) -> _RootLadder:
    return _RootLadder(field, place)


@lru_cache(maxsize=None)
def _power(field: NumberField, k: int) -> Tuple[Fraction, ...]:
    d = field.degree
    if k < d:
        return tuple(Fraction(int(i == k)) for i in range(d))
    previous = _power(field, k - 1)
    top = previous[-1]
    shifted = (Fraction(0),) + previous[:-1]
    return tuple(s - top * c for s, c in zip(shifted, field.min_poly[:d]))


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Sequence[Scalar]):
        if len(coords) != field.degree:
            raise ValueError(f"expected {field.degree} coordinates, got {len(coords)}")
        self.field = field
        self.coords: Tuple[Fraction, ...] = tuple(Fraction(c) for c in coords)

    # construction helpers

    def _lift(self, other) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return None

    # predicates

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_integral_coords(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (int, Fraction, FieldElement)):
            return NotImplemented
        return self.coords == self._lift(other).coords

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    # arithmetic

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        other = self._lift(other)
        if other is None:
            return NotImplemented
        d = self.field.degree
        product = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        product[i + j] += a * b
        coords = list(product[:d])
        for k in range(d, 2 * d - 1):
            if product[k]:
                coords = [c + product[k] * p for c, p in zip(coords, self.field.power(k))]
        return FieldElement(self.field, coords)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if self.is_rational():
            return self.field.scalar(1 / self.coords[0])
        # solve M_x · y = e_0
        unit = [Fraction(int(i == 0)) for i in range(self.field.degree)]
        solution = linalg.solve(multiplication_matrix(self), unit)
        return FieldElement(self.field, solution)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a / other for a in self.coords])
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** -exponent
        result = self.field.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # formatting

    def to_strings(self) -> List[str]:
        return [format_rational(c) for c in self.coords]

    def sort_key(self) -> Tuple[Fraction, ...]:
        return self.coords

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coords):
            if c == 0:
                continue
            body = format_rational(c)
            if k == 0:
                terms.append(body)
            else:
                power = "t" if k == 1 else f"t^{k}"
                terms.append(power if c == 1 else f"-{power}" if c == -1 else f"{body}*{power}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def __repr__(self) -> str:
        return f"FieldElement({self})"


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _poly_str(coeffs: Sequence[int]) -> str:
    terms = []
    for k in reversed(range(len(coeffs))):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else "t" if k == 1 else f"t^{k}"
        if k == 0:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append(f"-{mono}")
        else:
            terms.append(f"{c}{mono}")
    return " + ".join(terms).replace("+ -", "- ")


def nf_new(
    min_poly: Sequence[int],
    class_number_one: bool = True,
    allow_unverified_irreducibility: Optional[bool] = None,
) -> NumberField:
    """Build a field from a monic integer polynomial given constant term first."""
    if allow_unverified_irreducibility is None:
        allow_unverified_irreducibility = settings.ALLOW_UNVERIFIED_IRREDUCIBILITY
    coeffs = list(min_poly)
    if len(coeffs) < 2:
        raise InvalidFieldError("minimal polynomial must have degree at least 1", min_poly=coeffs)
    if any(isinstance(c, bool) or int(c) != c for c in coeffs):
        raise InvalidFieldError("minimal polynomial must have integer coefficients", min_poly=coeffs)
    coeffs = [int(c) for c in coeffs]
    if coeffs[-1] != 1:
        raise InvalidFieldError("minimal polynomial must be monic", min_poly=coeffs)
    d = len(coeffs) - 1
    f = Poly(list(reversed(coeffs)), _t, domain="ZZ")

    if gcd(f, f.diff(_t)).degree() > 0:
        raise InvalidFieldError("minimal polynomial is not squarefree", min_poly=coeffs)
    if d <= 4:
        if not f.is_irreducible:
            raise InvalidFieldError("minimal polynomial is reducible over Q", min_poly=coeffs)
    elif not allow_unverified_irreducibility:
        raise InvalidFieldError(
            "irreducibility is only verified for degree <= 4; set ALLOW_UNVERIFIED_IRREDUCIBILITY",
            degree=d,
        )

    real_roots, complex_roots = f.intervals(all=True)
    isolations = []
    for (lo, hi), _multiplicity in real_roots:
        interval = CertifiedInterval(_to_fraction(lo), _to_fraction(hi))
        if interval.width > 0 and f.count_roots(lo, hi) != 1:
            raise InvalidFieldError("root isolation failed", interval=interval)
        isolations.append(interval)
    isolations.sort(key=lambda iv: iv.lo, reverse=True)

    boxes = []
    for (corner_lo, corner_hi), _multiplicity in complex_roots:
        re_lo, im_lo = corner_lo.as_real_imag()
        re_hi, im_hi = corner_hi.as_real_imag()
        if _to_fraction(im_lo) >= 0:  # one representative per conjugate pair
            boxes.append((
                CertifiedInterval(_to_fraction(re_lo), _to_fraction(re_hi)),
                CertifiedInterval(_to_fraction(im_lo), _to_fraction(im_hi)),
            ))
    r = len(isolations)
    s = (d - r) // 2
    if r + 2 * s != d:
        raise InvalidFieldError("signature does not add up to the degree", r=r, degree=d)

    field = NumberField(
        min_poly=tuple(coeffs),
        degree=d,
        signature=(r, s),
        discriminant=int(f.discriminant()),
        root_isolations=tuple(isolations),
        complex_boxes=tuple(boxes[:s]),
        class_number_one=class_number_one,
    )
    logger.info(
        f"Field {field.label}: degree {d}, signature {field.signature}, discriminant {field.discriminant}"
    )
    return field


def multiplication_matrix(x: FieldElement) -> List[List[Fraction]]:
    """Matrix of y -> x*y in the power basis (column j = coordinates of x*θ^j)."""
    field = x.field
    d = field.degree
    columns = []
    for j in range(d):
        columns.append((x * FieldElement(field, field.power(j))).coords)
    return [[columns[j][i] for j in range(d)] for i in range(d)]


def norm(x: FieldElement) -> Fraction:
    if x.is_rational():
        return x.coords[0] ** x.field.degree
    return linalg.det(multiplication_matrix(x))


def trace(x: FieldElement) -> Fraction:
    if x.is_rational():
        return x.coords[0] * x.field.degree
    matrix = multiplication_matrix(x)
    return sum((matrix[i][i] for i in range(len(matrix))), Fraction(0))


def resultant_norm(x: FieldElement) -> Fraction:
    """N(x) up to sign as Res(min_poly, g) where x = g(θ); the second norm route."""
    if x.is_rational():
        return x.coords[0] ** x.field.degree
    f = Poly(list(reversed(x.field.min_poly)), _t, domain="QQ")
    g = Poly(list(reversed(x.coords)), _t, domain="QQ")
    return _to_fraction(f.resultant(g))


def _check_place(field: NumberField, place: int) -> None:
    if not 0 <= place < field.r:
        raise DegenerateError(f"real place {place} out of range", field=field.label, r=field.r)


def _horner(x: FieldElement, root: CertifiedInterval) -> CertifiedInterval:
    acc = CertifiedInterval.point(x.coords[-1])
    for c in reversed(x.coords[:-1]):
        acc = acc * root + c
    return acc


def embed(x: FieldElement, place: int, width: Optional[Fraction] = None) -> CertifiedInterval:
    """Certified interval of width <= `width` around σ_place(x).

    Every level comes from the same bisection ladder, and interval Horner
    evaluation is inclusion-monotone, so calls with shrinking widths nest.
    """
    _check_place(x.field, place)
    if width is None:
        width = settings.embed_width
    if x.is_rational():
        return CertifiedInterval.point(x.coords[0])
    level = _start_level(x, place, width)
    while True:
        root = x.field.root_interval(place, level)
        value = _horner(x, root)
        if value.width <= width or root.width == 0:
            return value
        level += 1


def _start_level(x: FieldElement, place: int, width: Fraction) -> int:
    """First ladder level whose Lipschitz estimate already meets `width`."""
    root = x.field.root_interval(place, 0)
    if root.width == 0:
        return 0
    radius = root.magnitude
    slope = sum((k * abs(c) * radius ** (k - 1) for k, c in enumerate(x.coords) if k), Fraction(0))
    ratio = slope * root.width / width
    if ratio <= 1:
        return 0
    return (ceil(ratio) - 1).bit_length()


def _complex_magnitude_bound(x: FieldElement) -> Fraction:
    radius = x.field.cauchy_bound()
    return sum((abs(c) * radius ** k for k, c in enumerate(x.coords)), Fraction(0))


def sign_at(x: FieldElement, place: int) -> int:
    """Exact sign of σ_place(x).

    Zero is decided on coordinates. Otherwise the embedding is refined until it
    excludes 0, using |σ_place(x)| >= |N(x)| / prod_{j != place} ub|σ_j(x)| to
    pick a width that is guaranteed to separate. Results are memoized per
    (field, coordinates, place).
    """
    _check_place(x.field, place)
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.coords[0] > 0 else -1
    return _separated_sign(x.field, x.coords, place)


@lru_cache(maxsize=65536)
def _separated_sign(field: NumberField, coords: Tuple[Fraction, ...], place: int) -> int:
    x = FieldElement(field, coords)
    quick = embed(x, place, Fraction(1, 1024))
    if quick.excludes_zero():
        return quick.sign()
    others = Fraction(1)
    for j in range(field.r):
        if j != place:
            others *= embed(x, j, Fraction(1)).magnitude
    if field.s:
        others *= _complex_magnitude_bound(x) ** (2 * field.s)
    lower = abs(norm(x)) / others
    logger.debug(f"sign_at: refining {x} at place {place} to width {float(lower) / 2:.3e}")
    value = embed(x, place, lower / 2)
    if not value.excludes_zero():
        raise AssertionError(f"sign of {x} at place {place} not separated at the norm bound")
    return value.sign()


def product_formula_check(x: FieldElement) -> bool:
    """Infinite-place product against the norm, computed two exact ways.

    ∏_v |σ_v(x)| = |N(x)| and the finite places contribute 1/|N(x)|. The
    multiplication-matrix norm and the resultant norm must agree in absolute
    value; for totally real fields the product of embedding intervals must
    also bracket |N(x)|.
    """
    if x.is_zero():
        raise DegenerateError("product formula needs a nonzero element")
    by_matrix = abs(norm(x))
    by_resultant = abs(resultant_norm(x))
    if by_matrix != by_resultant:
        logger.warning(f"norm routes disagree for {x}: {by_matrix} vs {by_resultant}")
        return False
    if x.field.is_totally_real:
        product = CertifiedInterval.point(1)
        for place in range(x.field.r):
            product = product * embed(x, place).abs()
        if not product.contains(by_matrix):
            logger.warning(f"embedding product {product} misses |N({x})| = {by_matrix}")
            return False
    return True


def conjugate(x: FieldElement) -> FieldElement:
    """Non-trivial automorphism of a quadratic field (identity on ℚ)."""
    field = x.field
    if field.degree == 1:
        return x
    if field.degree != 2:
        raise DegenerateError("conjugate is only available for quadratic fields", degree=field.degree)
    a1 = field.min_poly[1]
    c0, c1 = x.coords
    # θ -> -a1 - θ
    return FieldElement(field, [c0 - a1 * c1, -c1])


def sqrt_abs_discriminant(field: NumberField) -> Optional[FieldElement]:
    """w in K with σ_0(w) = √|Δ_K|, when one is available.

    Perfect squares give a rational; for quadratic fields 2θ + a1 squares to Δ.
    """
    delta = abs(field.discriminant)
    root = _isqrt_exact(delta)
    if root is not None:
        return field.scalar(root)
    if field.degree == 2 and field.discriminant > 0:
        return field.element([field.min_poly[1], 2])
    return None


def _isqrt_exact(value: int) -> Optional[int]:
    root = isqrt(value)
    return root if root * root == value else None
