from typing import List, Optional

from pydantic import BaseModel


class RealRecord(BaseModel):
    exact: Optional[str] = None
    interval: Optional[List[str]] = None
    symbolic: Optional[str] = None


class HypothesisRecord(BaseModel):
    name: str
    required: int
    actual: int
    passed: bool


class BoundReportRecord(BaseModel):
    bound_name: str
    lhs: int
    rhs: RealRecord
    holds: bool
    slack: RealRecord
    strict: bool = False
    hypothesis: HypothesisRecord
    instance: Optional[str] = None


class BoundErrorRecord(BaseModel):
    error: str
    detail: str
    exit_code: int
    bound_name: Optional[str] = None
    hypothesis: Optional[HypothesisRecord] = None
    instance: Optional[str] = None


class VolumeRecord(BaseModel):
    field: str
    n: int
    convention: str
    value: RealRecord
    proof: RealRecord
    discriminant: RealRecord
    finite_volume: str
    place_volumes: List[str]  # w_v with vol(C_v) = σ_v(w_v)


class CountRecord(BaseModel):
    count: int
    dilation: str = "1"
    points: Optional[List[List[List[str]]]] = None


class GrowthRecord(BaseModel):
    rows: List[List[int]]
    exponent: float
    fit_from: int
    target: int


class TriangulationRecord(BaseModel):
    place: str
    k: int
    m: int
    simplices: List[List[int]]
    pairwise_volume_zero: bool
    volume_sum_matches: bool
    contained_everywhere: bool
    holds: bool
    volume: RealRecord
    volume_lower_bound: str
    volume_bound_holds: bool
