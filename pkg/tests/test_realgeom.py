from fractions import Fraction

import pytest

from app.core.exceptions import DegenerateError
from app.services import realgeom
from app.services.realgeom import Membership, PlacePoint
from tests.conftest import point


def pp(field, place, *coords):
    return PlacePoint(point(field, *coords), place)


@pytest.fixture
def square(Q):
    return [pp(Q, 0, 0, 0), pp(Q, 0, 1, 0), pp(Q, 0, 1, 1), pp(Q, 0, 0, 1)]


def test_hull_drops_interior_points_and_orders_ccw(Q, square):
    center = pp(Q, 0, Fraction(1, 2), Fraction(1, 2))
    P = realgeom.hull(square + [center])
    assert list(P.vertices) == square
    assert len(P.facets) == 4
    assert not P.symmetric


def test_membership(Q, square):
    P = realgeom.hull(square)
    assert realgeom.member(P, pp(Q, 0, Fraction(1, 2), Fraction(1, 3))) == Membership.INSIDE
    assert realgeom.member(P, pp(Q, 0, 1, Fraction(1, 2))) == Membership.BOUNDARY
    assert realgeom.member(P, pp(Q, 0, 2, 0)) == Membership.OUTSIDE


def test_hull_at_second_place(Q2):
    # at v2 the point θ sits at -√2
    P = realgeom.hull([pp(Q2, 1, (0, 1)), pp(Q2, 1, 1)])
    assert realgeom.contains_point(P, pp(Q2, 1, 0))
    assert not realgeom.contains_point(P, pp(Q2, 1, 2))
    # w with σ2(w) = 1 + √2, the segment length
    assert realgeom.place_volume(P) == 1 - Q2.theta


def test_degenerate_hull(Q):
    with pytest.raises(DegenerateError):
        realgeom.hull([pp(Q, 0, 0, 0), pp(Q, 0, 1, 1), pp(Q, 0, 2, 2)])


def test_symmetric_hull(Q):
    P = realgeom.sym_hull([pp(Q, 0, 1)])
    assert P.symmetric
    assert realgeom.place_volume(P) == 2
    cross = realgeom.hull([pp(Q, 0, 1, 0), pp(Q, 0, -1, 0), pp(Q, 0, 0, 1), pp(Q, 0, 0, -1)])
    assert cross.symmetric


def test_volumes(Q, square):
    assert realgeom.place_volume(realgeom.hull(square)) == 1
    assert realgeom.simplex_volume(square[:3]) == Fraction(1, 2)
    scaled = realgeom.scale_polytope(realgeom.hull(square), Fraction(3))
    assert realgeom.place_volume(scaled) == 9


def test_triangulation_uses_every_point(Q, square):
    center = pp(Q, 0, Fraction(1, 2), Fraction(1, 2))
    T = realgeom.triangulate(square + [center])
    assert len(T) == 4
    assert realgeom.interiors_disjoint(T)
    total = sum((realgeom.simplex_volume(T.simplex_points(k)) for k in range(len(T))), Q.zero)
    assert total == 1


def test_triangulation_of_square_places_in_label_order(Q, square):
    T = realgeom.triangulate(square)
    assert T.simplices == ((0, 1, 2), (0, 2, 3))


def test_intersections(Q, square):
    P = realgeom.hull(square)
    shifted = realgeom.hull([v.translated(point(Q, Fraction(1, 2), Fraction(1, 2))) for v in square])
    both = realgeom.intersect(P, shifted)
    assert realgeom.place_volume(both) == Fraction(1, 4)
    neighbour = realgeom.hull([v.translated(point(Q, 1, 0)) for v in square])
    assert realgeom.overlap_volume(P, neighbour) == 0
    with pytest.raises(DegenerateError):
        realgeom.intersect(P, neighbour)


def test_bounding_box(Q2):
    P = realgeom.hull([pp(Q2, 0, (0, 1)), pp(Q2, 0, -1)])
    (box,) = realgeom.bounding_box(P)
    assert box.lo <= -1 and box.hi >= Fraction(14142, 10000)


def test_dimension_limit(Q):
    coords = [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    with pytest.raises(DegenerateError):
        realgeom.hull([pp(Q, 0, *c) for c in coords])
