from fractions import Fraction

import pytest
import sympy

from app.core.exceptions import DegenerateError
from app.services import adelic, omodule
from app.services.adelic import MeasureConvention
from app.services.numberfield import nf_new, sign_at
from app.services.reals import EmbeddedReal, RationalReal
from tests.conftest import point


def test_lattice_simplex_volume(unit_simplex_q2):
    assert omodule.finite_volume(unit_simplex_q2.finite_part) == Fraction(1, 2)
    volume = adelic.adelic_volume(unit_simplex_q2)
    assert volume.exact() == Fraction(1, 4)
    check = adelic.simplex_volume_check(unit_simplex_q2)
    assert check.holds and check.equality


def test_discriminant_convention_even_n(unit_simplex_q2):
    volume = adelic.adelic_volume(unit_simplex_q2, MeasureConvention.DISCRIMINANT)
    assert volume.exact() == Fraction(1, 32)


def test_figure_body_volumes(figure_body):
    assert adelic.adelic_volume(figure_body).exact() == 4
    with_disc = adelic.adelic_volume(figure_body, MeasureConvention.DISCRIMINANT)
    assert isinstance(with_disc, EmbeddedReal)
    assert with_disc.exact() is None
    assert with_disc.compare(Fraction(14142, 10000)) > 0
    assert with_disc.compare(Fraction(14143, 10000)) < 0


def test_convention_is_carried_by_the_body(figure_body):
    body = adelic.with_convention(figure_body, MeasureConvention.DISCRIMINANT)
    assert adelic.adelic_volume(body).exact() is None


@pytest.mark.parametrize("name, n", [("Q", 1), ("Q", 2), ("Q", 3), ("Q2", 1), ("Q2", 2), ("Q5", 1), ("Q3", 2), ("K3", 1)])
def test_cross_polytope_formula(fields, name, n):
    field = fields[name]
    units = [omodule.unit_vector(field, n, i) for i in range(n)]
    body = adelic.adelic_sym_hull(field, n, units)
    expected = adelic.cross_polytope_volume_formula(field, n)
    assert adelic.adelic_volume(body).exact() == Fraction(int(expected.p), int(expected.q))


def test_cross_polytope_formula_complex_field():
    field = nf_new([-2, 0, 0, 1])
    assert adelic.cross_polytope_volume_formula(field, 1) == 4 * sympy.pi


def test_figure_counts(figure_body):
    points = adelic.lattice_points(figure_body)
    assert points == [point(figure_body.field, -1), point(figure_body.field, 0), point(figure_body.field, 1)]
    assert adelic.lattice_points_direct(figure_body) == points
    assert len(adelic.lattice_points(adelic.dilate(figure_body, 2))) == 7


def test_dilate_rejects_non_positive(figure_body):
    with pytest.raises(DegenerateError):
        adelic.dilate(figure_body, 0)
    assert adelic.dilate(figure_body, 1) is figure_body


def test_embedded_lattice_vertices(figure_body):
    field = figure_body.field
    assert adelic.embedded_lattice_vertices(figure_body) == [point(field, -1), point(field, 1)]


def test_non_lattice_intersection(Q):
    left = adelic.adelic_hull(Q, 1, [point(Q, 0), point(Q, 2)])
    right = adelic.adelic_hull(Q, 1, [point(Q, 1), point(Q, 3)])
    assert adelic.is_lattice_polytope(left)
    both = adelic.adelic_intersect(left, right)
    assert both.finite_part.index_vs_standard == 2
    assert adelic.lattice_points(both) == [point(Q, 2)]
    assert not adelic.is_lattice_polytope(both)


def test_translated_finite_part_is_contained(Q2):
    generators = [point(Q2, (0, 1), 1), point(Q2, 3, (1, 1)), point(Q2, 1, 0)]
    P = adelic.adelic_hull(Q2, 2, generators)
    for j in range(len(generators)):
        assert omodule.module_contains(P.finite_part, adelic.translated_finite_part(P, j))


def test_translated_simplex_volume_is_at_least_the_floor(Q2):
    S = adelic.adelic_hull(Q2, 1, [point(Q2, 1), point(Q2, (1, 1))])
    check = adelic.simplex_volume_check(S)
    assert check.bound == 1
    assert check.holds


def test_triangulation_certificate(Q2):
    square = [point(Q2, 1, 1), point(Q2, 2, 1), point(Q2, 2, 2), point(Q2, 1, 2), point(Q2, Fraction(3, 2), Fraction(3, 2))]
    P = adelic.adelic_hull(Q2, 2, square)
    simplices, certificate = adelic.adelic_triangulation(P, 0)
    assert certificate.k == 4 and certificate.m == 3
    assert certificate.holds
    assert len(simplices) == 4
    bound = adelic.triangulation_volume_bound(P, 0)
    assert bound.holds
    assert bound.lower_bound == 1


def test_triangulation_needs_a_hull(figure_body):
    with pytest.raises(DegenerateError):
        adelic.adelic_triangulation(figure_body, 0)


def test_general_body_validates_places(Q2):
    module = omodule.standard_module(Q2, 1)
    with pytest.raises(DegenerateError):
        adelic.general_body(Q2, 1, module, [])


def test_growth_on_rational_segment(Q):
    segment = adelic.adelic_hull(Q, 1, [point(Q, 0), point(Q, 1)])
    result = adelic.growth_experiment(segment, 12)
    assert result.rows[0] == (1, 2)
    assert result.rows[-1] == (12, 13)
    assert result.target == 1
    assert 0.8 < result.exponent < 1.1


def test_disjointness_of_square_simplices(Q2):
    a, b, c, d = point(Q2, 1, 1), point(Q2, 2, 1), point(Q2, 2, 2), point(Q2, 1, 2)
    simplices = [adelic.adelic_hull(Q2, 2, s) for s in ([a, b, c], [a, b, d], [a, c, d], [b, c, d])]
    table = adelic.disjointness_table(simplices)
    assert [entry.pair for entry in table if entry.volume_zero] == [(0, 2), (1, 3)]
    assert adelic.max_disjoint_selection(simplices) == [0, 2]


def test_cubic_segment_volume_is_exact(K3):
    theta = (0, 1, 0)
    assert {sign_at(K3.theta, v) for v in range(3)} == {-1, 1}
    segment = adelic.adelic_hull(K3, 1, [point(K3, 0), point(K3, theta)])
    assert isinstance(adelic.infinite_volume(segment), RationalReal)
    assert adelic.adelic_volume(segment).exact() == 1
    check = adelic.simplex_volume_check(segment)
    assert check.bound == 1
    assert check.holds and check.equality


def test_cubic_triangle_volume_is_exact(K3):
    triangle = adelic.adelic_hull(K3, 2, [point(K3, 0, 0), point(K3, 1, 0), point(K3, 0, (0, 1, 0))])
    assert adelic.adelic_volume(triangle).exact() == Fraction(1, 8)
    assert adelic.adelic_volume(triangle, MeasureConvention.DISCRIMINANT).exact() == Fraction(1, 8 * 229)
    check = adelic.simplex_volume_check(triangle)
    assert check.bound == Fraction(1, 8)
    assert check.equality


def test_cubic_three_point_hull_compares(K3):
    body = adelic.adelic_hull(K3, 1, [point(K3, 0), point(K3, 1), point(K3, (0, 1, 0))])
    check = adelic.simplex_volume_check(body)
    assert check.holds and not check.equality


@pytest.mark.parametrize(
    "convention, before, after",
    [
        (MeasureConvention.PROOF, Fraction(1, 4), Fraction(81, 64)),
        (MeasureConvention.DISCRIMINANT, Fraction(1, 32), Fraction(81, 512)),
    ],
)
def test_dilation_scales_volume(unit_simplex_q2, convention, before, after):
    dilated = adelic.dilate(unit_simplex_q2, Fraction(3, 2))
    assert dilated.finite_part == unit_simplex_q2.finite_part
    assert adelic.adelic_volume(unit_simplex_q2, convention).exact() == before
    assert adelic.adelic_volume(dilated, convention).exact() == after
    assert after == before * Fraction(3, 2) ** (2 * 2)


@pytest.mark.parametrize("factor", [2, 3, Fraction(3, 2), Fraction(1, 3)])
def test_dilation_scales_cubic_volume(K3, factor):
    segment = adelic.adelic_hull(K3, 1, [point(K3, 0), point(K3, (0, 1, 0))])
    dilated = adelic.dilate(segment, factor)
    assert adelic.adelic_volume(dilated).exact() == Fraction(factor) ** 3


def test_sym_hull_points_are_closed_under_negation(Q2, K3):
    bodies = [
        adelic.adelic_sym_hull(Q2, 2, [point(Q2, 1, 0), point(Q2, (0, 1), 1)]),
        adelic.adelic_sym_hull(K3, 1, [point(K3, (1, 1, 0))]),
    ]
    for body in bodies:
        points = set(adelic.lattice_points(body))
        assert tuple(body.field.zero for _ in range(body.n)) in points
        assert len(points) > 1
        assert {tuple(-x for x in p) for p in points} == points
