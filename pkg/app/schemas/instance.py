import json
from fractions import Fraction
from typing import Annotated, Any, List, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, field_validator

from app.config import settings


def _canonical_rational(value: Any) -> str:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        try:
            q = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    raise ValueError(f"rationals are given as integers or 'p/q' strings, got {value!r}")


RationalStr = Annotated[str, BeforeValidator(_canonical_rational)]

# a point of K^n: n coordinates, each the d power-basis coefficients
PointSpec = List[List[RationalStr]]


class FieldSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min_poly: List[int]  # constant term first
    class_number_one: bool = True
    allow_unverified_irreducibility: bool = False

    @field_validator("min_poly")
    @classmethod
    def monic(cls, value: List[int]) -> List[int]:
        if len(value) < 2:
            raise ValueError("min_poly needs degree >= 1")
        if value[-1] != 1:
            raise ValueError("min_poly must be monic (last coefficient 1)")
        return value


BoundName = Literal["all", "blichfeldt", "blichfeldt_classical", "henze_classical", "henze", "gaudron", "embedded"]


class InstanceOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bound: BoundName = "all"
    k_max: int = Field(default=20, ge=4)
    dilation: RationalStr = "1"
    place: int = Field(default=1, ge=1)  # 1-based: v1, v2, ...
    list_points: bool = False


class InstanceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: FieldSpec
    n: int = Field(ge=1)
    kind: Literal["hull", "sym_hull", "general"] = "hull"
    generators: Optional[List[PointSpec]] = None
    infinite_parts: Optional[List[List[PointSpec]]] = None
    module_generators: Optional[List[PointSpec]] = None
    convention: Literal["proof", "discriminant"] = Field(default_factory=lambda: settings.DEFAULT_CONVENTION)
    options: Optional[InstanceOptions] = None

    def to_canonical_json(self) -> str:
        data = self.model_dump(mode="json", exclude_none=True)
        return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
