import copy
import json
from fractions import Fraction

import pytest

from app.config import settings
from app.core.exceptions import ClassNumberError, InvalidFieldError, ParseError
from app.schemas.instance import InstanceSpec
from app.services.adelic import BodyKind, MeasureConvention, adelic_volume, lattice_points
from app.services.instances import build_body, load_instance, point_to_spec
from tests.conftest import FIGURE1_INSTANCE, SQUARE_INSTANCE


def test_rationals_are_canonicalised():
    data = copy.deepcopy(SQUARE_INSTANCE)
    data["generators"][0] = [["2/2", " 0 "], [1, "-0/3"]]
    spec = load_instance(json.dumps(data))
    assert spec.generators[0] == [["1", "0"], ["1", "0"]]


@pytest.mark.parametrize("bad", ["1/0", "one", True, 0.5])
def test_bad_rationals(bad):
    data = copy.deepcopy(SQUARE_INSTANCE)
    data["generators"][0][0][0] = bad
    with pytest.raises(ParseError):
        load_instance(json.dumps(data))


def test_invalid_json():
    with pytest.raises(ParseError) as info:
        load_instance("{not json")
    assert info.value.exit_code == 2


def test_unknown_keys_are_rejected():
    data = dict(FIGURE1_INSTANCE, colour="red")
    with pytest.raises(ParseError):
        load_instance(json.dumps(data))


def test_non_monic_polynomial_is_a_parse_error():
    data = dict(FIGURE1_INSTANCE, field={"min_poly": [-2, 0, 2]})
    with pytest.raises(ParseError):
        load_instance(json.dumps(data))


def test_reducible_polynomial():
    spec = load_instance(json.dumps(dict(FIGURE1_INSTANCE, field={"min_poly": [-4, 0, 1]})))
    with pytest.raises(InvalidFieldError):
        build_body(spec)


def test_class_number_assertion_is_required():
    field = {"min_poly": [-2, 0, 1], "class_number_one": False}
    spec = load_instance(json.dumps(dict(FIGURE1_INSTANCE, field=field)))
    with pytest.raises(ClassNumberError):
        build_body(spec)


def test_options_are_validated():
    with pytest.raises(ParseError):
        load_instance(json.dumps(dict(FIGURE1_INSTANCE, options={"k_max": 3})))
    with pytest.raises(ParseError):
        load_instance(json.dumps(dict(FIGURE1_INSTANCE, options={"place": 0})))
    spec = load_instance(json.dumps(dict(FIGURE1_INSTANCE, options={"dilation": "4/2"})))
    assert spec.options.dilation == "2"
    assert spec.options.bound == "all"


def test_canonical_json_is_stable():
    spec = load_instance(json.dumps(SQUARE_INSTANCE))
    again = load_instance(spec.to_canonical_json())
    assert again == spec
    assert again.to_canonical_json() == spec.to_canonical_json()


def test_figure_instance_builds_the_figure_body(figure_body):
    body = build_body(load_instance(json.dumps(FIGURE1_INSTANCE)))
    assert body.provenance.kind == BodyKind.GENERAL
    assert adelic_volume(body).exact() == 4
    assert lattice_points(body) == lattice_points(figure_body)


def test_hull_instance():
    body = build_body(InstanceSpec.model_validate(SQUARE_INSTANCE))
    assert body.provenance.kind == BodyKind.HULL
    assert len(lattice_points(body)) == 4
    assert point_to_spec(body.generators[0]) == [["1", "0"], ["1", "0"]]


def test_convention_is_carried():
    body = build_body(InstanceSpec.model_validate(dict(FIGURE1_INSTANCE, convention="discriminant")))
    assert body.convention == MeasureConvention.DISCRIMINANT
    assert adelic_volume(body).compare(Fraction(141, 100)) > 0


@pytest.mark.parametrize(
    "change, message",
    [
        ({"generators": None}, "needs generators"),
        ({"kind": "general", "generators": None}, "needs infinite_parts"),
        ({"n": 3}, "coordinates"),
    ],
)
def test_structural_errors(change, message):
    data = {k: v for k, v in dict(SQUARE_INSTANCE, **change).items() if v is not None}
    spec = load_instance(json.dumps(data))
    with pytest.raises(ParseError, match=message):
        build_body(spec)


def test_wrong_number_of_coefficients():
    data = copy.deepcopy(SQUARE_INSTANCE)
    data["generators"][1][0] = ["2"]
    with pytest.raises(ParseError, match="coefficients"):
        build_body(load_instance(json.dumps(data)))


def test_wrong_number_of_infinite_parts():
    data = copy.deepcopy(FIGURE1_INSTANCE)
    data["infinite_parts"] = data["infinite_parts"][:1]
    with pytest.raises(ParseError, match="infinite parts"):
        build_body(load_instance(json.dumps(data)))


def test_convention_defaults_from_settings(monkeypatch):
    assert load_instance(json.dumps(FIGURE1_INSTANCE)).convention == "proof"
    monkeypatch.setattr(settings, "DEFAULT_CONVENTION", "discriminant")
    spec = load_instance(json.dumps(FIGURE1_INSTANCE))
    assert spec.convention == "discriminant"
    assert build_body(spec).convention == MeasureConvention.DISCRIMINANT
    explicit = load_instance(json.dumps(dict(FIGURE1_INSTANCE, convention="proof")))
    assert build_body(explicit).convention == MeasureConvention.PROOF
