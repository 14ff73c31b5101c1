import json
from fractions import Fraction

import pytest

from app.services.adelic import adelic_hull
from app.services.numberfield import nf_new
from app.services.reproductions import figure1_body


@pytest.fixture(scope="session")
def Q():
    return nf_new([0, 1])


@pytest.fixture(scope="session")
def Q2():
    """ℚ(√2), Δ = 8."""
    return nf_new([-2, 0, 1])


@pytest.fixture(scope="session")
def Q5():
    """ℚ(√5) through the golden ratio, Δ = 5."""
    return nf_new([-1, -1, 1])


@pytest.fixture(scope="session")
def Q3():
    return nf_new([-3, 0, 1])


@pytest.fixture(scope="session")
def K3():
    """Totally real cubic field, θ³ - 4θ + 1 = 0, Δ = 229; θ is a unit."""
    return nf_new([1, -4, 0, 1])


@pytest.fixture(scope="session")
def fields(Q, Q2, Q5, Q3, K3):
    return {"Q": Q, "Q2": Q2, "Q5": Q5, "Q3": Q3, "K3": K3}


def point(field, *coords):
    """Point of K^n from power-basis coefficient lists (or plain rationals)."""
    out = []
    for c in coords:
        if isinstance(c, (int, Fraction)):
            out.append(field.scalar(c))
        else:
            out.append(field.element(list(c)))
    return tuple(out)


@pytest.fixture(scope="session")
def figure_body(Q2):
    return figure1_body(Q2)


@pytest.fixture(scope="session")
def unit_simplex_q2(Q2):
    """conv_A{0, θe1, e2} over ℚ(√2)."""
    return adelic_hull(Q2, 2, [point(Q2, 0, 0), point(Q2, (0, 1), 0), point(Q2, 0, 1)])


FIGURE1_INSTANCE = {
    "field": {"min_poly": [-2, 0, 1]},
    "n": 1,
    "kind": "general",
    "module_generators": [[["1", "0"]]],
    "infinite_parts": [
        [[["-1", "0"]], [["1", "0"]]],
        [[["-1", "0"]], [["1", "0"]]],
    ],
}

SQUARE_INSTANCE = {
    "field": {"min_poly": [-2, 0, 1]},
    "n": 2,
    "kind": "hull",
    "generators": [
        [["1", "0"], ["1", "0"]],
        [["2", "0"], ["1", "0"]],
        [["2", "0"], ["2", "0"]],
        [["1", "0"], ["2", "0"]],
    ],
}

THIN_BOX_INSTANCE = {
    "field": {"min_poly": [0, 1]},
    "n": 2,
    "kind": "general",
    "module_generators": [[["1"], ["0"]], [["0"], ["1"]]],
    "infinite_parts": [[[["0"], ["0"]], [["5"], ["0"]], [["5"], ["1/10"]], [["0"], ["1/10"]]]],
}

SHARP_SIMPLEX_INSTANCE = {
    "field": {"min_poly": [0, 1]},
    "n": 2,
    "kind": "general",
    "module_generators": [[["1"], ["0"]], [["0"], ["1"]]],
    "infinite_parts": [[[["0"], ["0"]], [["3"], ["0"]], [["0"], ["1"]]]],
}


@pytest.fixture
def write_instance(tmp_path):
    def write(data, name="instance.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write
