"""Adelic polytopes: a global module for the finite places plus one place polytope per real place."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from app.config import settings
from app.core.exceptions import DegenerateError
from app.core.monitoring import track_performance
from app.services import omodule, realgeom
from app.services.intervals import CertifiedInterval
from app.services.numberfield import (
    FieldElement,
    NumberField,
    conjugate,
    norm,
    sqrt_abs_discriminant,
)
from app.services.omodule import OModule, Point, point_sort_key
from app.services.reals import CertifiedReal, EmbeddedReal, ProductReal, RationalReal
from app.services.realgeom import Membership, PlacePoint, PlacePolytope

logger = logging.getLogger(__name__)


class MeasureConvention(str, Enum):
    PROOF = "proof"
    DISCRIMINANT = "discriminant"


class BodyKind(str, Enum):
    GENERAL = "general"
    HULL = "hull"
    SYM_HULL = "sym_hull"


@dataclass(frozen=True)
class Provenance:
    kind: BodyKind
    generators: Tuple[Point, ...] = ()


@dataclass(frozen=True)
class AdelicPolytope:
    field: NumberField
    n: int
    finite_part: OModule
    infinite_parts: Tuple[PlacePolytope, ...]
    provenance: Provenance
    convention: MeasureConvention = MeasureConvention.PROOF

    @property
    def generators(self) -> Tuple[Point, ...]:
        return self.provenance.generators

    @property
    def is_symmetric(self) -> bool:
        return all(P.symmetric for P in self.infinite_parts)


def _place_points(points: Sequence[Point], place: int) -> List[PlacePoint]:
    return [PlacePoint(tuple(p), place) for p in points]


def _dedupe_points(points: Sequence[Sequence[FieldElement]]) -> List[Point]:
    seen = set()
    out = []
    for p in points:
        p = tuple(p)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def adelic_hull(field: NumberField, n: int, points: Sequence[Sequence[FieldElement]]) -> AdelicPolytope:
    field.require_totally_real("adelic_hull")
    points = _dedupe_points(points)
    module = omodule.module_from_generators(field, n, points)
    parts = tuple(realgeom.hull(_place_points(points, v)) for v in range(field.r))
    return AdelicPolytope(field, n, module, parts, Provenance(BodyKind.HULL, tuple(points)))


def adelic_sym_hull(field: NumberField, n: int, points: Sequence[Sequence[FieldElement]]) -> AdelicPolytope:
    field.require_totally_real("adelic_sym_hull")
    points = _dedupe_points(points)
    module = omodule.module_from_generators(field, n, points)
    parts = tuple(realgeom.sym_hull(_place_points(points, v)) for v in range(field.r))
    return AdelicPolytope(field, n, module, parts, Provenance(BodyKind.SYM_HULL, tuple(points)))


def general_body(
    field: NumberField, n: int, module: OModule, place_polytopes: Sequence[PlacePolytope]
) -> AdelicPolytope:
    field.require_totally_real("general_body")
    if module.field != field or module.n != n:
        raise DegenerateError("module does not live in K^n", n=n)
    if len(place_polytopes) != field.r:
        raise DegenerateError("one polytope per real place is required", expected=field.r, got=len(place_polytopes))
    for v, P in enumerate(place_polytopes):
        if P.place != v or P.dimension != n:
            raise DegenerateError("place polytope does not match its place", place=v)
    return AdelicPolytope(field, n, module, tuple(place_polytopes), Provenance(BodyKind.GENERAL))


def with_convention(C: AdelicPolytope, convention: MeasureConvention) -> AdelicPolytope:
    return AdelicPolytope(C.field, C.n, C.finite_part, C.infinite_parts, C.provenance, convention)


# volumes

def _radical_divisor(field: NumberField, n: int, value: CertifiedReal) -> CertifiedReal:
    """value / (√|Δ_K|)ⁿ, exact whenever a square root of |Δ_K| is at hand."""
    delta = abs(field.discriminant)
    if n % 2 == 0:
        return value.affine(Fraction(1, delta ** (n // 2)))
    root = sqrt_abs_discriminant(field)
    if root is not None and root.is_rational():
        return value.affine(1 / root.coords[0] ** n)
    if root is not None:
        divisor = root ** n
        exact = value.exact()
        if exact is not None:
            return EmbeddedReal(field.scalar(exact) / divisor, 0)
        if isinstance(value, EmbeddedReal) and value.place == 0:
            return EmbeddedReal(value.element / divisor, 0)
    if isinstance(value, ProductReal):
        return ProductReal(value.factors, value.coefficient, value.offset, Fraction(delta), n)
    exact = value.exact()
    return ProductReal((), exact, Fraction(0), Fraction(delta), n)


def infinite_volume(C: AdelicPolytope) -> CertifiedReal:
    """∏_v vol(P_v), folded into one field element when possible."""
    field = C.field
    ws = [realgeom.place_volume(P) for P in C.infinite_parts]
    # vol(P_v) = |σ_v(w_v)|, so a common w up to sign gives |N(w)|
    if all(w == ws[0] or w == -ws[0] for w in ws):
        return RationalReal(abs(norm(ws[0]))) if field.degree > 1 else RationalReal(abs(ws[0].coords[0]))
    if field.degree == 2:
        z = ws[0] * conjugate(ws[1])
        return RationalReal(z.coords[0]) if z.is_rational() else EmbeddedReal(z, 0)
    return ProductReal([(w, v) for v, w in enumerate(ws)])


def adelic_volume(C: AdelicPolytope, convention: Optional[MeasureConvention] = None) -> CertifiedReal:
    convention = MeasureConvention(convention or C.convention)
    value = infinite_volume(C).affine(omodule.finite_volume(C.finite_part))
    if convention == MeasureConvention.DISCRIMINANT:
        value = _radical_divisor(C.field, C.n, value)
    return value


def cross_polytope_volume_formula(field: NumberField, n: int) -> sympy.Expr:
    """2^{dn} π^{sn} / ((n!)^r ((2n)!)^s), kept symbolic."""
    r, s = field.signature
    coefficient = sympy.Rational(2 ** (field.degree * n), math.factorial(n) ** r * math.factorial(2 * n) ** s)
    return coefficient * sympy.pi ** (s * n)


# lattice points

def embedding_box(C: AdelicPolytope) -> List[CertifiedInterval]:
    """Bounding box of ρ(C_∞), coordinate i*d + v."""
    boxes = [realgeom.bounding_box(P) for P in C.infinite_parts]
    d = C.field.degree
    return [boxes[v][i] for i in range(C.n) for v in range(d)]


def in_body(C: AdelicPolytope, x: Sequence[FieldElement]) -> bool:
    """Infinite-place membership of a point of 𝔐."""
    return all(
        realgeom.contains_point(P, PlacePoint(tuple(x), v)) for v, P in enumerate(C.infinite_parts)
    )


def lattice_points(C: AdelicPolytope, cap: Optional[int] = None) -> List[Point]:
    """C ∩ Kⁿ through the embedded lattice ρ(ι(𝔐))."""
    with track_performance("lattice_points"):
        candidates = omodule.enumerate_in_box(C.finite_part, embedding_box(C), cap)
        points = [x for x in candidates if in_body(C, x)]
    logger.debug(f"lattice_points: {len(points)} of {len(candidates)} box candidates")
    return points


def lattice_points_direct(C: AdelicPolytope, cap: Optional[int] = None) -> List[Point]:
    """Same set through a power-basis coordinate scan of 𝔐 and per-place membership."""
    flat_box = omodule.flat_coordinate_box(C.field, C.n, embedding_box(C))
    points = [x for x in omodule.scan_coordinate_box(C.finite_part, flat_box, cap) if in_body(C, x)]
    points.sort(key=point_sort_key)
    return points


def dilate(C: AdelicPolytope, factor) -> AdelicPolytope:
    factor = Fraction(factor)
    if factor <= 0:
        raise DegenerateError("dilation factor must be positive", factor=factor)
    if factor == 1:
        return C
    parts = tuple(realgeom.scale_polytope(P, factor) for P in C.infinite_parts)
    return AdelicPolytope(C.field, C.n, C.finite_part, parts, Provenance(BodyKind.GENERAL), C.convention)


# triangulations

@dataclass
class TriangulationCertificate:
    place: int
    k: int
    m: int
    simplices: List[Tuple[int, ...]]
    pairwise_volume_zero: bool
    volume_sum_matches: bool
    contained_everywhere: bool

    @property
    def holds(self) -> bool:
        return self.k >= self.m and self.pairwise_volume_zero and self.volume_sum_matches and self.contained_everywhere


def adelic_triangulation(P: AdelicPolytope, place: int) -> Tuple[List[AdelicPolytope], TriangulationCertificate]:
    """Lift a placing triangulation of P at one place to adelic lattice simplices."""
    if P.provenance.kind != BodyKind.HULL:
        raise DegenerateError("triangulation needs an adelic lattice polytope")
    generators = list(P.generators)
    if len(generators) < P.n + 1:
        raise DegenerateError("need at least n+1 generators", n=P.n, generators=len(generators))
    triangulation = realgeom.triangulate(_place_points(generators, place))
    simplices = [
        adelic_hull(P.field, P.n, [generators[i] for i in simplex]) for simplex in triangulation.simplices
    ]
    parts_here = [S.infinite_parts[place] for S in simplices]
    pairwise = all(
        realgeom.overlap_volume(A, B).is_zero() for A, B in itertools.combinations(parts_here, 2)
    )
    total = sum((realgeom.place_volume(A) for A in parts_here), P.field.zero)
    matches = total == realgeom.place_volume(P.infinite_parts[place])
    contained = all(
        realgeom.contains_point(P.infinite_parts[v], vertex)
        for S in simplices
        for v, part in enumerate(S.infinite_parts)
        for vertex in part.vertices
    )
    certificate = TriangulationCertificate(
        place=place,
        k=len(simplices),
        m=len(generators) - P.n,
        simplices=list(triangulation.simplices),
        pairwise_volume_zero=pairwise,
        volume_sum_matches=matches,
        contained_everywhere=contained,
    )
    logger.info(f"triangulation at v{place + 1}: k={certificate.k}, m={certificate.m}")
    return simplices, certificate


@dataclass
class SimplexVolumeCheck:
    volume: CertifiedReal
    bound: Fraction
    holds: bool
    equality: bool


def simplex_volume_check(S: AdelicPolytope) -> SimplexVolumeCheck:
    volume = adelic_volume(S, MeasureConvention.PROOF)
    bound = Fraction(1, math.factorial(S.n) ** S.field.degree)
    comparison = volume.compare(bound)
    return SimplexVolumeCheck(volume, bound, comparison >= 0, comparison == 0)


@dataclass
class TriangulationVolumeBound:
    volume: CertifiedReal
    k: int
    m: int
    lower_bound: Fraction
    holds: bool


def triangulation_volume_bound(P: AdelicPolytope, place: int = 0) -> TriangulationVolumeBound:
    """vol_A(P) >= k/(n!)^d >= m/(n!)^d for the lifted triangulation at `place`."""
    _simplices, certificate = adelic_triangulation(P, place)
    volume = adelic_volume(P, MeasureConvention.PROOF)
    lower = Fraction(certificate.k, math.factorial(P.n) ** P.field.degree)
    holds = certificate.k >= certificate.m and volume.compare(lower) >= 0
    return TriangulationVolumeBound(volume, certificate.k, certificate.m, lower, holds)


def translated_finite_part(P: AdelicPolytope, j: int) -> OModule:
    """Finite part of conv_A{a_k - a_j}, contained in that of P."""
    generators = P.generators
    if not generators:
        raise DegenerateError("translation needs a generated body")
    shift = generators[j]
    translated = [omodule.sub_points(a, shift) for k, a in enumerate(generators) if k != j]
    return omodule.module_from_generators(P.field, P.n, translated)


# intersections

def adelic_intersect(C1: AdelicPolytope, C2: AdelicPolytope) -> AdelicPolytope:
    if C1.field != C2.field or C1.n != C2.n:
        raise DegenerateError("bodies live in different spaces")
    module = omodule.module_intersect(C1.finite_part, C2.finite_part)
    parts = tuple(realgeom.intersect(P, Q) for P, Q in zip(C1.infinite_parts, C2.infinite_parts))
    return AdelicPolytope(C1.field, C1.n, module, parts, Provenance(BodyKind.GENERAL), C1.convention)


def is_lattice_polytope(C: AdelicPolytope) -> bool:
    """Whether C = conv_A(A) for some finite A ⊂ Kⁿ.

    The largest admissible A is C ∩ Kⁿ; C is a lattice polytope exactly when that
    set reaches every vertex at every place and generates 𝔐.
    """
    if C.provenance.kind == BodyKind.HULL:
        return True
    points = set(lattice_points(C))
    for P in C.infinite_parts:
        for vertex in P.vertices:
            if vertex.coords not in points:
                return False
    try:
        generated = omodule.module_from_generators(C.field, C.n, sorted(points, key=point_sort_key))
    except DegenerateError:
        return False
    return generated == C.finite_part


def embedded_lattice_vertices(C: AdelicPolytope) -> List[Point]:
    """Vertices of ρ(C_∞) that lie in ρ(ι(𝔐)).

    σ_v is injective, so a vertex tuple (y_v) comes from x ∈ Kⁿ only when all
    y_v are the same point of Kⁿ.
    """
    found = []
    for combo in itertools.product(*(P.vertices for P in C.infinite_parts)):
        first = combo[0].coords
        if all(y.coords == first for y in combo) and omodule.contains(C.finite_part, first):
            found.append(first)
    found.sort(key=point_sort_key)
    return found


# examples machinery

@dataclass
class PairOverlap:
    pair: Tuple[int, int]
    place_overlaps: List[FieldElement]

    @property
    def volume_zero(self) -> bool:
        return any(w.is_zero() for w in self.place_overlaps)


def disjointness_table(simplices: Sequence[AdelicPolytope]) -> List[PairOverlap]:
    """vol_A(S_i ∩ S_j) = 0 exactly when some place overlap is lower-dimensional."""
    table = []
    for i, j in itertools.combinations(range(len(simplices)), 2):
        overlaps = [
            realgeom.overlap_volume(P, Q)
            for P, Q in zip(simplices[i].infinite_parts, simplices[j].infinite_parts)
        ]
        table.append(PairOverlap((i, j), overlaps))
    return table


def max_disjoint_selection(simplices: Sequence[AdelicPolytope]) -> List[int]:
    table = {entry.pair: entry.volume_zero for entry in disjointness_table(simplices)}
    count = len(simplices)
    for size in range(count, 0, -1):
        for subset in itertools.combinations(range(count), size):
            if all(table[pair] for pair in itertools.combinations(subset, 2)):
                return list(subset)
    return []


def _grid(P: PlacePolytope, step: Fraction) -> List[PlacePoint]:
    box = realgeom.bounding_box(P)
    field = P.vertices[0].coords[0].field
    axes = []
    for interval in box:
        start = math.ceil(interval.lo / step)
        stop = math.floor(interval.hi / step)
        axes.append([step * k for k in range(start, stop + 1)])
    points = []
    for coords in itertools.product(*axes):
        point = PlacePoint(tuple(field.scalar(c) for c in coords), P.place)
        if realgeom.member(P, point) == Membership.INSIDE:
            points.append(point)
    return points


def find_uncovered_witness(
    P: AdelicPolytope,
    simplices: Sequence[AdelicPolytope],
    step: Optional[Fraction] = None,
    finest: Optional[Fraction] = None,
) -> Optional[Tuple[PlacePoint, ...]]:
    """z = (z_v) with z_v inside P_v and, for every S_j, some z_v outside S_{j,v}.

    Rational grid search, halving the step until `finest`.
    """
    step = Fraction(step or settings.WITNESS_GRID_STEP)
    finest = Fraction(finest or settings.WITNESS_GRID_FINEST)
    everything = frozenset(range(len(simplices)))
    while step >= finest:
        per_place: List[Dict[frozenset, PlacePoint]] = []
        for v, part in enumerate(P.infinite_parts):
            representatives: Dict[frozenset, PlacePoint] = {}
            for z in _grid(part, step):
                covering = frozenset(
                    j for j, S in enumerate(simplices) if realgeom.contains_point(S.infinite_parts[v], z)
                )
                representatives.setdefault(covering, z)
            per_place.append(representatives)
        for combo in itertools.product(*(sorted(r, key=sorted) for r in per_place)):
            covered = everything
            for covering in combo:
                covered = covered & covering
            if not covered:
                witness = tuple(per_place[v][covering] for v, covering in enumerate(combo))
                logger.info(f"uncovered witness found at grid step {step}")
                return witness
        step /= 2
    return None


# growth

@dataclass
class GrowthResult:
    rows: List[Tuple[int, int]]
    exponent: float
    fit_from: int
    target: int = dc_field(default=0)


def growth_experiment(C: AdelicPolytope, k_max: int, cap: Optional[int] = None) -> GrowthResult:
    """|kC ∩ Kⁿ| for k = 1..k_max and the least-squares log-log slope over the upper tail."""
    if k_max < 2:
        raise DegenerateError("growth experiment needs k_max >= 2", k_max=k_max)
    rows = []
    for k in range(1, k_max + 1):
        rows.append((k, len(lattice_points(dilate(C, k), cap))))
    fit_from = max(1, min(k_max - 1, math.ceil(settings.GROWTH_FIT_TAIL * k_max)))
    tail = [(k, count) for k, count in rows if k >= fit_from and count > 0]
    ks = np.log(np.array([k for k, _ in tail], dtype=float))
    counts = np.log(np.array([c for _, c in tail], dtype=float))
    slope, _intercept = np.polyfit(ks, counts, 1)
    return GrowthResult(rows, float(slope), fit_from, C.n * C.field.degree)
