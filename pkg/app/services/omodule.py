"""Finite parts of adelic bodies as one global 𝒪-module 𝔐 ⊂ Kⁿ.

A point x ∈ Kⁿ is flattened to the rational vector (x_{i,j}) at index i*d + j,
where x_i = Σ_j x_{i,j} θ^j. The module is kept as an nd × nd rational matrix in
row Hermite normal form (rows are the ℤ-basis). Embedded coordinates ρ(ι(x))
are indexed i*d + v for real place v.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from app.config import settings
from app.core.exceptions import CandidateCapExceeded, ClassNumberError, DegenerateError
from app.core.monitoring import track_performance
from app.services import linalg
from app.services.intervals import CertifiedInterval
from app.services.numberfield import FieldElement, NumberField, embed, sign_at, trace

logger = logging.getLogger(__name__)

Point = Tuple[FieldElement, ...]


def flatten(point: Sequence[FieldElement]) -> List[Fraction]:
    return [c for x in point for c in x.coords]


def unflatten(field: NumberField, n: int, vector: Sequence[Fraction]) -> Point:
    d = field.degree
    return tuple(FieldElement(field, vector[i * d:(i + 1) * d]) for i in range(n))


def point_sort_key(point: Sequence[FieldElement]) -> Tuple[Fraction, ...]:
    return tuple(flatten(point))


def scale_point(point: Sequence[FieldElement], factor) -> Point:
    return tuple(x * factor for x in point)


def sub_points(p: Sequence[FieldElement], q: Sequence[FieldElement]) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def unit_vector(field: NumberField, n: int, i: int) -> Point:
    return tuple(field.one if k == i else field.zero for k in range(n))


@dataclass(frozen=True, eq=False)
class OModule:
    field: NumberField
    n: int
    generators: Tuple[Point, ...]
    basis_rows: Tuple[Tuple[Fraction, ...], ...]
    index_vs_standard: Fraction

    @property
    def z_basis(self) -> Tuple[Point, ...]:
        return tuple(unflatten(self.field, self.n, row) for row in self.basis_rows)

    @property
    def rank(self) -> int:
        return self.n * self.field.degree

    def __eq__(self, other) -> bool:
        if not isinstance(other, OModule):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self.basis_rows == other.basis_rows

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.basis_rows))


def _canonical_rows(rows: Sequence[Sequence[Fraction]], expected_rank: int) -> Tuple[Tuple[Fraction, ...], ...]:
    integer_rows, scale = linalg.clear_denominators(rows)
    hnf = linalg.hermite_normal_form(integer_rows)
    if len(hnf) != expected_rank:
        raise DegenerateError(
            "module generators do not span a full-rank lattice", rank=len(hnf), expected=expected_rank
        )
    return tuple(tuple(Fraction(x, scale) for x in row) for row in hnf)


def _module_from_rows(
    field: NumberField, n: int, rows: Sequence[Sequence[Fraction]], generators: Sequence[Point]
) -> OModule:
    basis = _canonical_rows(rows, n * field.degree)
    index = Fraction(1)
    for k, row in enumerate(basis):
        index *= row[k]
    return OModule(field, n, tuple(tuple(g) for g in generators), basis, index)


def module_from_generators(field: NumberField, n: int, points: Sequence[Sequence[FieldElement]]) -> OModule:
    """𝒪-span of the points: ℤ-span of θ^j · a_i, put in Hermite normal form."""
    if not field.class_number_one:
        raise ClassNumberError("a global module needs class number one", field=field.label)
    points = [tuple(p) for p in points]
    if any(len(p) != n for p in points):
        raise DegenerateError("generator has the wrong length", n=n)
    if linalg.rank([list(p) for p in points]) < n:
        raise DegenerateError("generators do not span K^n", n=n)
    rows = []
    for p in points:
        for j in range(field.degree):
            power = FieldElement(field, field.power(j))
            rows.append(flatten(scale_point(p, power)))
    module = _module_from_rows(field, n, rows, points)
    logger.debug(f"module over {field.label}: index {module.index_vs_standard}")
    return module


def standard_module(field: NumberField, n: int) -> OModule:
    return module_from_generators(field, n, [unit_vector(field, n, i) for i in range(n)])


def coefficients(M: OModule, x: Sequence[FieldElement]) -> List[Fraction]:
    """Coordinates of x in the (upper triangular) z_basis."""
    target = flatten(x)
    c: List[Fraction] = []
    for k, row in enumerate(M.basis_rows):
        acc = target[k] - sum((c[i] * M.basis_rows[i][k] for i in range(k)), Fraction(0))
        c.append(acc / row[k])
    return c


def contains(M: OModule, x: Sequence[FieldElement]) -> bool:
    if len(x) != M.n:
        return False
    return all(c.denominator == 1 for c in coefficients(M, x))


def module_contains(M1: OModule, M2: OModule) -> bool:
    """True when M2 ⊆ M1."""
    return all(contains(M1, b) for b in M2.z_basis)


def is_theta_stable(M: OModule) -> bool:
    theta = FieldElement(M.field, M.field.power(1)) if M.field.degree > 1 else M.field.one
    return all(contains(M, scale_point(b, theta)) for b in M.z_basis)


def finite_volume(M: OModule) -> Fraction:
    return 1 / M.index_vs_standard


def _dual_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    inverse = linalg.inverse([list(r) for r in rows])
    return linalg.transpose(inverse)


def module_intersect(M1: OModule, M2: OModule) -> OModule:
    """M1 ∩ M2 = (M1* + M2*)* on the underlying ℤ-lattices."""
    if M1.field != M2.field or M1.n != M2.n:
        raise DegenerateError("modules live in different spaces")
    if M1 == M2:
        return M1
    rank = M1.rank
    dual_sum = _canonical_rows(_dual_rows(M1.basis_rows) + _dual_rows(M2.basis_rows), rank)
    basis = _canonical_rows(_dual_rows(dual_sum), rank)
    generators = [unflatten(M1.field, M1.n, row) for row in basis]
    module = _module_from_rows(M1.field, M1.n, basis, generators)
    if not is_theta_stable(module):
        raise AssertionError("intersection of O-modules is not theta-stable")
    return module


def lattice_det_squared(M: OModule) -> Fraction:
    """det(ρ(ι(𝔐)))² through the trace-form Gram matrix (exact)."""
    basis = M.z_basis
    gram = []
    for b in basis:
        row = []
        for c in basis:
            acc = Fraction(0)
            for x, y in zip(b, c):
                acc += trace(x * y)
            row.append(acc)
        gram.append(row)
    return linalg.det(gram)


# Enumeration

@lru_cache(maxsize=None)
def trace_dual_basis(field: NumberField) -> Tuple[FieldElement, ...]:
    """ω*_j with Tr(θ^k ω*_j) = δ_jk, so x_j = Σ_v σ_v(x) σ_v(ω*_j)."""
    d = field.degree
    gram = [[trace(FieldElement(field, field.power(j + k))) for k in range(d)] for j in range(d)]
    inverse = linalg.inverse(gram)
    return tuple(FieldElement(field, inverse[j]) for j in range(d))


def embedded_coordinates(point: Sequence[FieldElement], width: Fraction) -> List[CertifiedInterval]:
    field = point[0].field
    return [embed(x, v, width) for x in point for v in range(field.r)]


def _integer_range(interval: CertifiedInterval) -> range:
    return range(math.ceil(interval.lo), math.floor(interval.hi) + 1)


def coefficient_box(M: OModule, bounds: Sequence[CertifiedInterval], width: Optional[Fraction] = None) -> List[CertifiedInterval]:
    """Enclosure of the z_basis coefficients of every module point inside the box.

    c_k = Σ_{i,v} σ_v(α_{k,i}) ρ_{i d + v} with α_{k,i} ∈ K built from (Bᵀ)⁻¹ and
    the trace-dual basis, so the only rounding is in embedding the α.
    """
    M.field.require_totally_real("enumeration")
    forms = _coefficient_forms(M, width or Fraction(1, 2 ** 40))
    box = []
    for form in forms:
        total = CertifiedInterval.point(0)
        for q, factor in enumerate(form):
            total = total + factor * bounds[q]
        box.append(total)
    return box


@lru_cache(maxsize=256)
def _coefficient_forms(M: OModule, width: Fraction) -> Tuple[Tuple[CertifiedInterval, ...], ...]:
    """σ_v(α_{k,i}) enclosures, row k indexed by i*d + v."""
    field = M.field
    d, n = field.degree, M.n
    dual = trace_dual_basis(field)
    binv_t = linalg.transpose(linalg.inverse([list(r) for r in M.basis_rows]))
    forms = []
    for k in range(M.rank):
        row = []
        for i in range(n):
            alpha = field.zero
            for j in range(d):
                coefficient = binv_t[k][i * d + j]
                if coefficient:
                    alpha = alpha + dual[j] * coefficient
            row.extend(embed(alpha, v, width) for v in range(d))
        forms.append(tuple(row))
    return tuple(forms)


@lru_cache(maxsize=256)
def _basis_images(M: OModule, width: Fraction) -> Tuple[Tuple[CertifiedInterval, ...], ...]:
    return tuple(tuple(embedded_coordinates(b, width)) for b in M.z_basis)


def _in_box(point: Sequence[FieldElement], bounds: Sequence[CertifiedInterval]) -> bool:
    d = point[0].field.degree
    for i, x in enumerate(point):
        for v in range(d):
            bound = bounds[i * d + v]
            if sign_at(x - bound.lo, v) < 0 or sign_at(bound.hi - x, v) < 0:
                return False
    return True


def enumerate_in_box(
    M: OModule, bounds: Sequence[CertifiedInterval], cap: Optional[int] = None
) -> List[Point]:
    """All x ∈ 𝔐 with ρ(ι(x)) in the closed box, sorted by coordinate vector.

    Branch-and-bound over z_basis coefficients: a node fixes c_0..c_{t-1}; the
    interval image of the partial sum plus the remaining coefficient ranges is
    tested against the box. Leaves are confirmed by exact sign tests.
    """
    cap = cap or settings.CANDIDATE_CAP
    field = M.field
    if len(bounds) != M.rank:
        raise DegenerateError("box dimension does not match n*d", expected=M.rank, got=len(bounds))
    with track_performance("enumerate_in_box"):
        ranges = [_integer_range(iv) for iv in coefficient_box(M, bounds)]
        if any(len(r) == 0 for r in ranges):
            return []
        images = _basis_images(M, Fraction(1, 2 ** 30))
        spans = [CertifiedInterval(Fraction(r.start), Fraction(r.stop - 1)) for r in ranges]
        # tail[t][q]: interval image of Σ_{k>=t} c_k ρ_q(b_k) over the remaining ranges
        rank = M.rank
        tail = [[CertifiedInterval.point(0)] * rank for _ in range(rank + 1)]
        for t in reversed(range(rank)):
            tail[t] = [tail[t + 1][q] + images[t][q] * spans[t] for q in range(rank)]

        found: List[Point] = []
        visited = 0

        def descend(t: int, partial: List[CertifiedInterval], chosen: List[int]) -> None:
            nonlocal visited
            visited += 1
            if visited > cap:
                raise CandidateCapExceeded(
                    "enumeration exceeded the candidate cap", cap=cap, box=[str(b) for b in bounds]
                )
            for q in range(rank):
                reach = partial[q] + tail[t][q]
                if reach.hi < bounds[q].lo or reach.lo > bounds[q].hi:
                    return
            if t == rank:
                vector = [Fraction(0)] * rank
                for c, row in zip(chosen, M.basis_rows):
                    if c:
                        vector = [a + c * b for a, b in zip(vector, row)]
                point = unflatten(field, M.n, vector)
                if _in_box(point, bounds):
                    found.append(point)
                return
            for c in ranges[t]:
                descend(t + 1, [partial[q] + images[t][q] * c for q in range(rank)], chosen + [c])

        descend(0, [CertifiedInterval.point(0)] * rank, [])
    logger.debug(f"enumerate_in_box: {visited} nodes, {len(found)} points")
    found.sort(key=point_sort_key)
    return found


def flat_coordinate_box(field: NumberField, n: int, bounds: Sequence[CertifiedInterval]) -> List[CertifiedInterval]:
    """Enclosure of the power-basis coordinates x_{i,j} of points whose embedding is in the box."""
    field.require_totally_real("enumeration")
    d = field.degree
    dual = trace_dual_basis(field)
    width = Fraction(1, 2 ** 40)
    box = []
    for i in range(n):
        for j in range(d):
            total = CertifiedInterval.point(0)
            for v in range(d):
                total = total + embed(dual[j], v, width) * bounds[i * d + v]
            box.append(total)
    return box


def scan_coordinate_box(
    M: OModule, flat_box: Sequence[CertifiedInterval], cap: Optional[int] = None
) -> Iterator[Point]:
    """Every module point whose power-basis coordinates lie in `flat_box`.

    Uses the triangular z_basis: coordinate k of x = c·B only involves c_0..c_k.
    """
    cap = cap or settings.CANDIDATE_CAP
    rank = M.rank
    rows = M.basis_rows
    visited = itertools.count(1)

    def descend(k: int, chosen: List[int], partial: List[Fraction]) -> Iterator[Point]:
        if next(visited) > cap:
            raise CandidateCapExceeded("coordinate scan exceeded the candidate cap", cap=cap)
        if k == rank:
            yield unflatten(M.field, M.n, partial)
            return
        pivot = rows[k][k]
        lo = (flat_box[k].lo - partial[k]) / pivot
        hi = (flat_box[k].hi - partial[k]) / pivot
        for c in range(math.ceil(lo), math.floor(hi) + 1):
            following = [a + c * b for a, b in zip(partial, rows[k])]
            yield from descend(k + 1, chosen + [c], following)

    yield from descend(0, [], [Fraction(0)] * rank)
