"""Instance files to domain objects."""
import json
import logging
from fractions import Fraction
from typing import List, Sequence

from pydantic import ValidationError

from app.core.exceptions import ParseError
from app.schemas.instance import InstanceSpec, PointSpec
from app.services import omodule, realgeom
from app.services.adelic import (
    AdelicPolytope,
    MeasureConvention,
    adelic_hull,
    adelic_sym_hull,
    general_body,
    with_convention,
)
from app.services.numberfield import FieldElement, NumberField, nf_new
from app.services.omodule import Point

logger = logging.getLogger(__name__)


def load_instance(text: str) -> InstanceSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"instance is not valid JSON: {exc.msg}", line=exc.lineno) from exc
    try:
        return InstanceSpec.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ParseError(f"invalid instance at {location}: {first['msg']}", errors=exc.error_count()) from exc


def build_field(spec: InstanceSpec) -> NumberField:
    return nf_new(
        spec.field.min_poly,
        class_number_one=spec.field.class_number_one,
        allow_unverified_irreducibility=spec.field.allow_unverified_irreducibility,
    )


def parse_point(field: NumberField, n: int, raw: PointSpec) -> Point:
    if len(raw) != n:
        raise ParseError(f"point has {len(raw)} coordinates, expected {n}")
    coords = []
    for entry in raw:
        if len(entry) != field.degree:
            raise ParseError(f"coordinate has {len(entry)} coefficients, expected {field.degree}")
        coords.append(FieldElement(field, [Fraction(c) for c in entry]))
    return tuple(coords)


def parse_points(field: NumberField, n: int, raw: Sequence[PointSpec]) -> List[Point]:
    return [parse_point(field, n, p) for p in raw]


def point_to_spec(point: Sequence[FieldElement]) -> List[List[str]]:
    return [x.to_strings() for x in point]


def build_body(spec: InstanceSpec) -> AdelicPolytope:
    field = build_field(spec)
    n = spec.n
    convention = MeasureConvention(spec.convention)
    if spec.kind in ("hull", "sym_hull"):
        if not spec.generators:
            raise ParseError(f"kind {spec.kind!r} needs generators")
        points = parse_points(field, n, spec.generators)
        body = adelic_hull(field, n, points) if spec.kind == "hull" else adelic_sym_hull(field, n, points)
    else:
        if not spec.infinite_parts or not spec.module_generators:
            raise ParseError("kind 'general' needs infinite_parts and module_generators")
        if len(spec.infinite_parts) != field.r:
            raise ParseError(f"expected {field.r} infinite parts, got {len(spec.infinite_parts)}")
        module = omodule.module_from_generators(field, n, parse_points(field, n, spec.module_generators))
        parts = []
        for v, vertices in enumerate(spec.infinite_parts):
            points = [realgeom.PlacePoint(p, v) for p in parse_points(field, n, vertices)]
            parts.append(realgeom.hull(points))
        body = general_body(field, n, module, parts)
    logger.info(f"instance: {spec.kind} body over {field.label}, n={n}")
    return with_convention(body, convention)
