import pytest

from app.core.exceptions import DegenerateError
from app.services.bounds import rational_body
from app.services.plotting import body_outline, figure_csv, lattice_in_window, render_svg, rho, table_csv
from tests.conftest import point


def test_rho_places_coordinates(Q2):
    x, y = rho(point(Q2, (1, 1)))
    assert x == pytest.approx(2.41421356)
    assert y == pytest.approx(-0.41421356)


def test_figure_outline_is_the_square(figure_body):
    outline = body_outline(figure_body)
    assert outline[0] == outline[-1]
    assert {p for p in outline} == {(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)}


def test_window(figure_body):
    inside_window = lattice_in_window(figure_body, 1)
    assert len(inside_window) == 3


def test_svg(figure_body):
    svg = render_svg(figure_body, window=3, labels=True, title="unit box")
    assert svg.lstrip().startswith("<?xml")
    assert "<svg" in svg
    assert svg == render_svg(figure_body, window=3, labels=True, title="unit box")


def test_planar_only(Q2):
    from app.services.adelic import adelic_hull

    body = adelic_hull(Q2, 2, [point(Q2, 0, 0), point(Q2, 1, 0), point(Q2, 0, 1)])
    with pytest.raises(DegenerateError):
        render_svg(body)


def test_rational_plane_body():
    square = rational_body([[1, 1], [-1, -1], [1, -1], [-1, 1]])
    assert len(body_outline(square)) == 5


def test_figure_csv(figure_body):
    lines = figure_csv(figure_body, window=1).splitlines()
    assert lines[0] == "x1_0,x1_1,rho1,rho2,inside"
    assert len(lines) == 4
    assert all(line.endswith(",1") for line in lines[1:])


def test_table_csv_formats_rationals():
    from fractions import Fraction

    assert table_csv(["a", "b"], [[Fraction(1, 2), True]]) == "a,b\n1/2,True\n"
