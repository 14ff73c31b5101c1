"""Blichfeldt-type inequalities checked against exact counts and volumes.

Every verifier gates on its dimension hypothesis first and raises
`HypothesisError` (no verdict) when it fails. Right-hand sides are certified
reals, so `holds` is a certified comparison, never a float test.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.core.exceptions import (
    AdelicError,
    BoundViolation,
    DegenerateError,
    HypothesisError,
    UnresolvedComparisonError,
)
from app.services import linalg, omodule, realgeom
from app.services.adelic import (
    AdelicPolytope,
    MeasureConvention,
    adelic_volume,
    dilate,
    general_body,
    lattice_points,
)
from app.services.numberfield import FieldElement, NumberField, nf_new
from app.services.omodule import Point, flatten
from app.services.reals import CertifiedReal, compare_reals

logger = logging.getLogger(__name__)


@dataclass
class HypothesisCheck:
    name: str
    required: int
    actual: int

    @property
    def passed(self) -> bool:
        return self.actual == self.required

    def to_record(self) -> dict:
        return {"name": self.name, "required": self.required, "actual": self.actual, "passed": self.passed}


@dataclass
class BoundReport:
    bound_name: str
    lhs: int
    rhs: CertifiedReal
    holds: bool
    slack: CertifiedReal
    hypothesis_checked: HypothesisCheck
    strict: bool = False

    @property
    def equality(self) -> bool:
        return self.slack.exact() == 0

    def raise_for_violation(self) -> None:
        if not self.holds:
            raise BoundViolation(
                f"{self.bound_name} violated: {self.lhs} vs {self.rhs}", report=self, lhs=self.lhs, rhs=self.rhs
            )

    def to_record(self) -> dict:
        return {
            "bound_name": self.bound_name,
            "lhs": self.lhs,
            "rhs": self.rhs.to_record(),
            "holds": self.holds,
            "slack": self.slack.to_record(),
            "strict": self.strict,
            "hypothesis": self.hypothesis_checked.to_record(),
        }


# dimensions

def dim_over_K(points: Sequence[Sequence[FieldElement]]) -> int:
    """Affine dimension over K."""
    points = [tuple(p) for p in points]
    if len(points) < 2:
        return 0
    base = points[0]
    return linalg.rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def dim_over_Q(points: Sequence[Sequence[FieldElement]]) -> int:
    """Affine dimension over ℚ of the embedded points, via rational coordinates."""
    points = [flatten(p) for p in points]
    if len(points) < 2:
        return 0
    base = points[0]
    return linalg.rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def _gate(name: str, required: int, actual: int, bound_name: str) -> HypothesisCheck:
    check = HypothesisCheck(name, required, actual)
    if not check.passed:
        logger.info(f"{bound_name}: hypothesis {name} = {required} fails (got {actual})")
        raise HypothesisError(
            f"{bound_name}: hypothesis {name} = {required} fails (got {actual})", check=check
        )
    return check


def _report(name: str, lhs: int, rhs: CertifiedReal, check: HypothesisCheck, strict: bool = False) -> BoundReport:
    sign = rhs.compare(lhs)
    holds = sign > 0 if strict else sign >= 0
    report = BoundReport(name, lhs, rhs, holds, rhs.affine(Fraction(1), Fraction(-lhs)), check, strict)
    if not holds:
        logger.warning(f"{name} violated: {lhs} vs {rhs}")
    return report


def _require_symmetric(C: AdelicPolytope, bound_name: str) -> None:
    if not C.is_symmetric:
        check = HypothesisCheck("symmetric", 1, 0)
        raise HypothesisError(f"{bound_name}: body is not symmetric", check=check)


# verifiers

def blichfeldt_adelic(C: AdelicPolytope, points: Optional[List[Point]] = None) -> BoundReport:
    """|C ∩ Kⁿ| <= (n!)^d vol_A(C) + n."""
    C.field.require_totally_real("blichfeldt_adelic")
    points = lattice_points(C) if points is None else points
    check = _gate("dim_K", C.n, dim_over_K(points), "blichfeldt_adelic")
    volume = adelic_volume(C, MeasureConvention.PROOF)
    rhs = volume.affine(Fraction(math.factorial(C.n) ** C.field.degree), Fraction(C.n))
    return _report("blichfeldt_adelic", len(points), rhs, check)


_RATIONALS: Optional[NumberField] = None


def rationals() -> NumberField:
    global _RATIONALS
    if _RATIONALS is None:
        _RATIONALS = nf_new([0, 1])
    return _RATIONALS


def rational_body(vertices: Sequence[Sequence[Fraction]], basis: Optional[Sequence[Sequence[Fraction]]] = None,
                  symmetric: bool = False) -> AdelicPolytope:
    """Polytope conv(vertices) ⊂ ℝ^m with lattice basis rows, as a body over ℚ."""
    field = rationals()
    m = len(vertices[0])
    if basis is None:
        basis = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    module = omodule.module_from_generators(field, m, [[field.scalar(x) for x in row] for row in basis])
    points = [realgeom.PlacePoint(tuple(field.scalar(x) for x in v), 0) for v in vertices]
    polytope = realgeom.sym_hull(points) if symmetric else realgeom.hull(points)
    return general_body(field, m, module, [polytope])


def blichfeldt_classical(P: AdelicPolytope, points: Optional[List[Point]] = None) -> BoundReport:
    """|C ∩ Λ| <= m! vol(C)/det Λ + m for a body over ℚ."""
    if P.field.degree != 1:
        raise HypothesisError("blichfeldt_classical needs a body over Q", check=HypothesisCheck("degree", 1, P.field.degree))
    points = lattice_points(P) if points is None else points
    check = _gate("dim", P.n, dim_over_K(points), "blichfeldt_classical")
    volume = adelic_volume(P, MeasureConvention.PROOF)  # vol(C) / det Λ
    rhs = volume.affine(Fraction(math.factorial(P.n)), Fraction(P.n))
    return _report("blichfeldt_classical", len(points), rhs, check)


def laguerre(m: int, x) -> Fraction:
    """L_m(x) = Σ_k C(m, k) x^k / k!."""
    if m < 0:
        raise ValueError("laguerre degree must be non-negative")
    x = Fraction(x)
    return sum((Fraction(math.comb(m, k)) * x ** k / math.factorial(k) for k in range(m + 1)), Fraction(0))


def _henze_factor(m: int) -> Fraction:
    return Fraction(math.factorial(m), 2 ** m) * laguerre(m, 2)


def henze_classical(P: AdelicPolytope, points: Optional[List[Point]] = None) -> BoundReport:
    """|C ∩ Λ| <= (m!/2^m) L_m(2) vol(C)/det Λ for C = -C."""
    if P.field.degree != 1:
        raise HypothesisError("henze_classical needs a body over Q", check=HypothesisCheck("degree", 1, P.field.degree))
    if not P.infinite_parts[0].symmetric:
        raise HypothesisError("henze_classical: body is not symmetric", check=HypothesisCheck("symmetric", 1, 0))
    points = lattice_points(P) if points is None else points
    check = _gate("dim", P.n, dim_over_K(points), "henze_classical")
    rhs = adelic_volume(P, MeasureConvention.PROOF).affine(_henze_factor(P.n))
    return _report("henze_classical", len(points), rhs, check)


def henze_adelic(C: AdelicPolytope, points: Optional[List[Point]] = None) -> BoundReport:
    """|C ∩ Kⁿ| <= ((nd)!/2^{nd}) L_{nd}(2) vol_A(C)/(√|Δ_K|)ⁿ."""
    _require_symmetric(C, "henze_adelic")
    points = lattice_points(C) if points is None else points
    nd = C.n * C.field.degree
    check = _gate("dim_Q", nd, dim_over_Q(points), "henze_adelic")
    rhs = adelic_volume(C, MeasureConvention.DISCRIMINANT).affine(_henze_factor(nd))
    return _report("henze_adelic", len(points), rhs, check)


def gaudron_check(C: AdelicPolytope, points: Optional[List[Point]] = None) -> BoundReport:
    """|C ∩ Kⁿ| < (5n)^{nd} vol_A(C), strict."""
    _require_symmetric(C, "gaudron")
    points = lattice_points(C) if points is None else points
    check = _gate("dim_K", C.n, dim_over_K(points), "gaudron")
    factor = Fraction(5 * C.n) ** (C.n * C.field.degree)
    rhs = adelic_volume(C, MeasureConvention.PROOF).affine(factor)
    return _report("gaudron", len(points), rhs, check, strict=True)


def _embedded_rhs(C: AdelicPolytope) -> CertifiedReal:
    nd = C.n * C.field.degree
    return adelic_volume(C, MeasureConvention.DISCRIMINANT).affine(Fraction(math.factorial(nd)), Fraction(nd))


def blichfeldt_embedded(C: AdelicPolytope, points: Optional[List[Point]] = None) -> BoundReport:
    """|C ∩ Kⁿ| <= (nd)! vol_A(C)/(√|Δ_K|)ⁿ + nd."""
    points = lattice_points(C) if points is None else points
    nd = C.n * C.field.degree
    check = _gate("dim_Q", nd, dim_over_Q(points), "blichfeldt_embedded")
    return _report("blichfeldt_embedded", len(points), _embedded_rhs(C), check)


@dataclass
class RhsComparison:
    adelic: CertifiedReal
    embedded: CertifiedReal
    adelic_le_embedded: bool

    def to_record(self) -> dict:
        return {
            "adelic_rhs": self.adelic.to_record(),
            "embedded_rhs": self.embedded.to_record(),
            "adelic_le_embedded": self.adelic_le_embedded,
        }


def rhs_comparison(C: AdelicPolytope) -> RhsComparison:
    """Adelic rhs (n!)^d vol_A + n against the embedded (nd)! vol_A/√|Δ|ⁿ + nd."""
    adelic = adelic_volume(C, MeasureConvention.PROOF).affine(
        Fraction(math.factorial(C.n) ** C.field.degree), Fraction(C.n)
    )
    embedded = _embedded_rhs(C)
    return RhsComparison(adelic, embedded, compare_reals(adelic, embedded) <= 0)


HYPOTHESES: Dict[str, Callable[[AdelicPolytope, List[Point]], bool]] = {
    "dim_K": lambda C, points: dim_over_K(points) == C.n,
    "dim_Q": lambda C, points: dim_over_Q(points) == C.n * C.field.degree,
}


def first_dilation_satisfying(C: AdelicPolytope, hypothesis: str, k_max: int = 64) -> Optional[int]:
    """Smallest integer k >= 1 for which the hypothesis holds on kC."""
    test = HYPOTHESES[hypothesis]
    for k in range(1, k_max + 1):
        if test(C, lattice_points(dilate(C, k))):
            return k
    return None


VERIFIERS: Dict[str, Callable[..., BoundReport]] = {
    "blichfeldt": blichfeldt_adelic,
    "blichfeldt_classical": blichfeldt_classical,
    "henze_classical": henze_classical,
    "henze": henze_adelic,
    "gaudron": gaudron_check,
    "embedded": blichfeldt_embedded,
}


def applicable_bounds(C: AdelicPolytope) -> List[str]:
    names = ["blichfeldt", "embedded"]
    if C.field.degree == 1:
        names.append("blichfeldt_classical")
    if C.is_symmetric:
        names += ["henze", "gaudron"]
        if C.field.degree == 1:
            names.append("henze_classical")
    return names


@dataclass
class CheckOutcome:
    reports: List[BoundReport]
    failures: List[Tuple[str, AdelicError]]

    @property
    def violations(self) -> List[BoundViolation]:
        return [error for _name, error in self.failures if isinstance(error, BoundViolation)]

    @property
    def exit_code(self) -> int:
        if self.violations:
            return BoundViolation.exit_code
        return max((error.exit_code for _name, error in self.failures), default=0)


def check_bounds(C: AdelicPolytope, bound: str = "all", cap: Optional[int] = None) -> CheckOutcome:
    """Run one named verifier, or every applicable one, on a shared point list.

    Hypothesis failures and violations of individual verifiers are collected,
    not raised, so the remaining verifiers still report. A violated bound keeps
    its report and also lands in `failures` as a `BoundViolation`.
    """
    names = applicable_bounds(C) if bound == "all" else [bound]
    points = lattice_points(C, cap)
    reports: List[BoundReport] = []
    failures: List[Tuple[str, AdelicError]] = []
    for name in names:
        try:
            report = VERIFIERS[name](C, points)
            reports.append(report)
            report.raise_for_violation()
        except (BoundViolation, HypothesisError, DegenerateError, UnresolvedComparisonError) as exc:
            failures.append((name, exc))
    logger.info(f"check_bounds: {len(reports)} reports, {len(failures)} failures")
    return CheckOutcome(reports, failures)
