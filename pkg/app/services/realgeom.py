"""Exact convex geometry in ℝⁿ (n <= 3) at one real place.

Coordinates are field elements; a point means its image under σ_place. Every
predicate is a determinant in K whose sign is decided by `sign_at`, so hulls,
membership and triangulations are exact.
"""
from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from app.config import settings
from app.core.exceptions import DegenerateError
from app.services import linalg
from app.services.intervals import CertifiedInterval
from app.services.numberfield import FieldElement, embed, sign_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlacePoint:
    coords: Tuple[FieldElement, ...]
    place: int

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def __neg__(self) -> "PlacePoint":
        return PlacePoint(tuple(-x for x in self.coords), self.place)

    def __sub__(self, other: "PlacePoint") -> Tuple[FieldElement, ...]:
        return tuple(a - b for a, b in zip(self.coords, other.coords))

    def scaled(self, factor) -> "PlacePoint":
        return PlacePoint(tuple(x * factor for x in self.coords), self.place)

    def translated(self, shift: Sequence[FieldElement]) -> "PlacePoint":
        return PlacePoint(tuple(a + b for a, b in zip(self.coords, shift)), self.place)

    def approx(self) -> Tuple[float, ...]:
        return tuple(float(embed(x, self.place, Fraction(1, 10 ** 9)).midpoint) for x in self.coords)


@dataclass(frozen=True)
class Facet:
    """Halfspace normal·x <= offset, evaluated at the polytope's place."""
    normal: Tuple[FieldElement, ...]
    offset: FieldElement

    def value(self, point: PlacePoint) -> FieldElement:
        return linalg.dot(self.normal, point.coords) - self.offset


@dataclass(frozen=True)
class PlacePolytope:
    vertices: Tuple[PlacePoint, ...]
    facets: Tuple[Facet, ...]
    place: int
    symmetric: bool = False

    @property
    def dimension(self) -> int:
        return self.vertices[0].dimension


class Membership(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class SimplexSet:
    points: Tuple[PlacePoint, ...]
    simplices: Tuple[Tuple[int, ...], ...]
    place: int

    def __len__(self) -> int:
        return len(self.simplices)

    def simplex_points(self, k: int) -> List[PlacePoint]:
        return [self.points[i] for i in self.simplices[k]]


# predicates

def _same_place(points: Sequence[PlacePoint]) -> int:
    places = {p.place for p in points}
    if len(places) != 1:
        raise DegenerateError("points live at different places", places=sorted(places))
    return places.pop()


def affine_rank(points: Sequence[PlacePoint]) -> int:
    if len(points) < 2:
        return 0
    base = points[0]
    return linalg.rank([list(p - base) for p in points[1:]])


def orientation_det(simplex: Sequence[PlacePoint]) -> FieldElement:
    """det[p_1 - p_0, ..., p_n - p_0]."""
    base = simplex[0]
    return linalg.det([list(p - base) for p in simplex[1:]])


def orientation(simplex: Sequence[PlacePoint]) -> int:
    return sign_at(orientation_det(simplex), simplex[0].place)


def _check_dimension(points: Sequence[PlacePoint]) -> int:
    if not points:
        raise DegenerateError("empty point set")
    n = points[0].dimension
    if n > settings.MAX_HULL_DIMENSION:
        raise DegenerateError(
            "exact hulls are limited in dimension", n=n, limit=settings.MAX_HULL_DIMENSION
        )
    return n


def _dedupe(points: Sequence[PlacePoint]) -> List[PlacePoint]:
    seen = set()
    out = []
    for p in points:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


# hulls

def _ccw_order(vertices: List[PlacePoint], place: int) -> List[PlacePoint]:
    count = len(vertices)
    center = tuple(sum((v.coords[i] for v in vertices[1:]), vertices[0].coords[i]) / count for i in range(2))

    def half(u) -> int:
        y = sign_at(u[1], place)
        return 0 if y > 0 or (y == 0 and sign_at(u[0], place) > 0) else 1

    def compare(a: PlacePoint, b: PlacePoint) -> int:
        u = (a.coords[0] - center[0], a.coords[1] - center[1])
        w = (b.coords[0] - center[0], b.coords[1] - center[1])
        ha, hb = half(u), half(w)
        if ha != hb:
            return ha - hb
        return -sign_at(u[0] * w[1] - u[1] * w[0], place)

    ordered = sorted(vertices, key=functools.cmp_to_key(compare))
    start = min(range(count), key=lambda i: vertices.index(ordered[i]))
    return ordered[start:] + ordered[:start]


def hull(points: Sequence[PlacePoint], symmetric: bool = False) -> PlacePolytope:
    """Minimal V-description plus facet H-description of conv(points) at their place."""
    n = _check_dimension(points)
    place = _same_place(points)
    points = _dedupe(points)
    if affine_rank(points) < n:
        raise DegenerateError("point set is not full-dimensional", n=n, points=len(points))

    facets: Dict[FrozenSet[int], Facet] = {}
    for subset in itertools.combinations(range(len(points)), n):
        base = points[subset[0]]
        normal = linalg.cofactor_normal([list(points[i] - base) for i in subset[1:]]) if n > 1 else [base.coords[0] * 0 + 1]
        if all(x == 0 for x in normal):
            continue
        offset = linalg.dot(normal, base.coords)
        signs = [sign_at(linalg.dot(normal, p.coords) - offset, place) for p in points]
        if all(s <= 0 for s in signs):
            facet = Facet(tuple(normal), offset)
        elif all(s >= 0 for s in signs):
            facet = Facet(tuple(-x for x in normal), -offset)
        else:
            continue
        incident = frozenset(i for i, s in enumerate(signs) if s == 0)
        facets.setdefault(incident, facet)

    vertices = []
    for i, p in enumerate(points):
        normals = [list(f.normal) for inc, f in facets.items() if i in inc]
        if normals and linalg.rank(normals) == n:
            vertices.append(p)
    if n == 2:
        vertices = _ccw_order(vertices, place)
    vertex_set = set(vertices)
    symmetric = symmetric or all(-v in vertex_set for v in vertices)
    ordered_facets = tuple(facets[key] for key in sorted(facets, key=lambda s: sorted(s)))
    logger.debug(f"hull at v{place + 1}: {len(vertices)} vertices, {len(ordered_facets)} facets")
    return PlacePolytope(tuple(vertices), ordered_facets, place, symmetric)


def sym_hull(points: Sequence[PlacePoint]) -> PlacePolytope:
    closed = list(points) + [-p for p in points]
    return hull(closed, symmetric=True)


def member(P: PlacePolytope, x: PlacePoint) -> Membership:
    if x.place != P.place:
        raise DegenerateError("point and polytope at different places", point=x.place, polytope=P.place)
    on_boundary = False
    for facet in P.facets:
        s = sign_at(facet.value(x), P.place)
        if s > 0:
            return Membership.OUTSIDE
        if s == 0:
            on_boundary = True
    return Membership.BOUNDARY if on_boundary else Membership.INSIDE


def contains_point(P: PlacePolytope, x: PlacePoint) -> bool:
    return member(P, x) != Membership.OUTSIDE


def scale_polytope(P: PlacePolytope, factor: Fraction) -> PlacePolytope:
    factor = Fraction(factor)
    if factor <= 0:
        raise DegenerateError("dilation factor must be positive", factor=factor)
    vertices = tuple(v.scaled(factor) for v in P.vertices)
    facets = tuple(Facet(f.normal, f.offset * factor) for f in P.facets)
    return PlacePolytope(vertices, facets, P.place, P.symmetric)


def bounding_box(P: PlacePolytope, width: Optional[Fraction] = None) -> List[CertifiedInterval]:
    """Outward-rounded coordinate extrema of the vertices."""
    width = width or Fraction(1, 2 ** 20)
    box = []
    for i in range(P.dimension):
        values = [embed(v.coords[i], P.place, width) for v in P.vertices]
        box.append(CertifiedInterval(min(iv.lo for iv in values), max(iv.hi for iv in values)))
    return box


# volumes and triangulations

def simplex_volume(simplex: Sequence[PlacePoint]) -> FieldElement:
    """w with σ_place(w) = |det| / n!."""
    det = orientation_det(simplex)
    n = len(simplex) - 1
    return det * (sign_at(det, simplex[0].place) * Fraction(1, factorial(n)))


def place_volume(P: PlacePolytope) -> FieldElement:
    """w ∈ K with σ_place(w) = vol_n(P), summed over a triangulation of the vertices."""
    triangulation = triangulate(P.vertices)
    total = P.vertices[0].coords[0] * 0
    for k in range(len(triangulation)):
        total = total + simplex_volume(triangulation.simplex_points(k))
    return total


def _initial_simplex(points: Sequence[PlacePoint], n: int) -> List[int]:
    chosen = [0]
    for i in range(1, len(points)):
        candidate = chosen + [i]
        if affine_rank([points[j] for j in candidate]) == len(candidate) - 1:
            chosen = candidate
            if len(chosen) == n + 1:
                return chosen
    raise DegenerateError("configuration is not full-dimensional", n=n, points=len(points))


def _barycentric_signs(simplex: Sequence[PlacePoint], p: PlacePoint) -> List[int]:
    """Sign of λ_i for each vertex i (replace vertex i by p, compare orientation)."""
    reference = orientation(simplex)
    signs = []
    for i in range(len(simplex)):
        replaced = list(simplex)
        replaced[i] = p
        signs.append(orientation(replaced) * reference)
    return signs


def triangulate(points: Sequence[PlacePoint]) -> SimplexSet:
    """Placing triangulation in label order.

    The first affinely independent points form the initial simplex. A point
    outside the current union is coned onto every boundary facet it sees; a
    point inside is inserted by stellar subdivision of each simplex containing it.
    Every distinct point is used, so k >= (#points) - n.
    """
    n = _check_dimension(points)
    place = _same_place(points)
    points = tuple(_dedupe(points))
    initial = _initial_simplex(points, n)
    simplices: List[Tuple[int, ...]] = [tuple(initial)]
    order = initial + [i for i in range(len(points)) if i not in initial]

    for i in order[n + 1:]:
        p = points[i]
        containing = []
        for simplex in simplices:
            signs = _barycentric_signs([points[j] for j in simplex], p)
            if all(s >= 0 for s in signs):
                containing.append((simplex, signs))
        if containing:
            for simplex, signs in containing:
                simplices.remove(simplex)
                for k, s in enumerate(signs):
                    if s > 0:
                        replaced = list(simplex)
                        replaced[k] = i
                        simplices.append(tuple(replaced))
            continue
        # outside: cone over visible boundary facets
        facet_count: Dict[FrozenSet[int], List[Tuple[int, ...]]] = {}
        for simplex in simplices:
            for k in range(n + 1):
                face = frozenset(simplex[:k] + simplex[k + 1:])
                facet_count.setdefault(face, []).append(simplex)
        added = []
        for face, owners in facet_count.items():
            if len(owners) != 1:
                continue
            simplex = owners[0]
            opposite = next(j for j in simplex if j not in face)
            face_list = sorted(face)
            inner = orientation([points[j] for j in face_list] + [points[opposite]])
            outer = orientation([points[j] for j in face_list] + [p])
            if outer != 0 and outer == -inner:
                added.append(tuple(face_list) + (i,))
        simplices.extend(added)

    canonical = tuple(sorted(tuple(sorted(s)) for s in simplices))
    result = SimplexSet(points, canonical, place)
    m = len(points) - n
    if len(result) < m:
        raise AssertionError(f"placing triangulation produced {len(result)} < {m} simplices")
    return result


# intersections

def _halfspace_vertices(facets: Sequence[Facet], n: int, place: int) -> List[PlacePoint]:
    found = []
    for subset in itertools.combinations(facets, n):
        matrix = [list(f.normal) for f in subset]
        solution = linalg.solve(matrix, [f.offset for f in subset])
        if solution is None:
            continue
        candidate = PlacePoint(tuple(solution), place)
        if all(sign_at(f.value(candidate), place) <= 0 for f in facets):
            found.append(candidate)
    return _dedupe(found)


def intersection_vertices(P: PlacePolytope, Q: PlacePolytope) -> List[PlacePoint]:
    if P.place != Q.place or P.dimension != Q.dimension:
        raise DegenerateError("polytopes are not comparable", places=(P.place, Q.place))
    return _halfspace_vertices(P.facets + Q.facets, P.dimension, P.place)


def intersect(P: PlacePolytope, Q: PlacePolytope) -> PlacePolytope:
    vertices = intersection_vertices(P, Q)
    if not vertices or affine_rank(vertices) < P.dimension:
        raise DegenerateError("intersection is empty or lower-dimensional", place=P.place)
    return hull(vertices, symmetric=P.symmetric and Q.symmetric)


def overlap_volume(P: PlacePolytope, Q: PlacePolytope) -> FieldElement:
    """Volume of P ∩ Q as w ∈ K; zero when the intersection is lower-dimensional."""
    vertices = intersection_vertices(P, Q)
    zero = P.vertices[0].coords[0] * 0
    if not vertices or affine_rank(vertices) < P.dimension:
        return zero
    return place_volume(hull(vertices))


def interiors_disjoint(triangulation: SimplexSet) -> bool:
    for a, b in itertools.combinations(range(len(triangulation)), 2):
        P = hull(triangulation.simplex_points(a))
        Q = hull(triangulation.simplex_points(b))
        if not overlap_volume(P, Q).is_zero():
            return False
    return True
