"""Built-in reproductions: the [-1,1]² body over ℚ[√2] and the two simplex configurations."""
import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from app.services import omodule, realgeom
from app.services.adelic import (
    AdelicPolytope,
    MeasureConvention,
    PairOverlap,
    TriangulationCertificate,
    adelic_hull,
    adelic_triangulation,
    adelic_volume,
    disjointness_table,
    embedded_lattice_vertices,
    find_uncovered_witness,
    general_body,
    lattice_points,
    max_disjoint_selection,
)
from app.services.numberfield import NumberField, format_rational, nf_new
from app.services.omodule import Point
from app.services.realgeom import PlacePoint

logger = logging.getLogger(__name__)

EXAMPLE_NAMES = ("figure1", "example1", "example2")
LABELS = "abcd"


def sqrt2_field() -> NumberField:
    return nf_new([-2, 0, 1])


def figure1_body(field: Optional[NumberField] = None) -> AdelicPolytope:
    """∏ 𝒪_v × [-1,1] × [-1,1] over ℚ[√2], n = 1."""
    field = field or sqrt2_field()
    module = omodule.standard_module(field, 1)
    parts = [
        realgeom.hull([PlacePoint((field.scalar(-1),), v), PlacePoint((field.scalar(1),), v)])
        for v in range(field.r)
    ]
    return general_body(field, 1, module, parts)


def _quadratic_point(field: NumberField, *coords: Tuple[int, int]) -> Point:
    return tuple(field.element([a, b]) for a, b in coords)


def example1_points(field: NumberField) -> List[Point]:
    """a = (√2, 1), b = (1, 3), c = (2, 3), d = (1, √2)."""
    return [
        _quadratic_point(field, (0, 1), (1, 0)),
        _quadratic_point(field, (1, 0), (3, 0)),
        _quadratic_point(field, (2, 0), (3, 0)),
        _quadratic_point(field, (1, 0), (0, 1)),
    ]


def example2_points(field: NumberField) -> List[Point]:
    """The unit square with corners (1,1), (2,1), (2,2), (1,2)."""
    return [
        _quadratic_point(field, (1, 0), (1, 0)),
        _quadratic_point(field, (2, 0), (1, 0)),
        _quadratic_point(field, (2, 0), (2, 0)),
        _quadratic_point(field, (1, 0), (2, 0)),
    ]


def _point_record(point: Point) -> List[List[str]]:
    return [x.to_strings() for x in point]


@dataclass
class FigureReport:
    body: AdelicPolytope
    inside: List[Point]
    embedded_vertices: List[Point]

    def to_record(self) -> dict:
        return {
            "example": "figure1",
            "field": self.body.field.label,
            "count": len(self.inside),
            "points": [_point_record(p) for p in self.inside],
            "embedded_lattice_vertices": [_point_record(p) for p in self.embedded_vertices],
            "volume": {
                "proof": adelic_volume(self.body, MeasureConvention.PROOF).to_record(),
                "discriminant": adelic_volume(self.body, MeasureConvention.DISCRIMINANT).to_record(),
            },
        }


def figure1() -> FigureReport:
    body = figure1_body()
    report = FigureReport(body, lattice_points(body), embedded_lattice_vertices(body))
    logger.info(f"figure1: {len(report.inside)} lattice points in the body")
    return report


@dataclass
class SimplexExampleReport:
    name: str
    polytope: AdelicPolytope
    simplices: List[AdelicPolytope]
    simplex_labels: List[str]
    table: List[PairOverlap]
    selection: List[int]
    witness: Optional[Tuple[PlacePoint, ...]]
    certificate: TriangulationCertificate

    @property
    def all_pairs_disjoint(self) -> bool:
        return all(entry.volume_zero for entry in self.table)

    @property
    def every_triple_overlaps(self) -> bool:
        zero = {entry.pair: entry.volume_zero for entry in self.table}
        return all(
            not all(zero[pair] for pair in itertools.combinations(triple, 2))
            for triple in itertools.combinations(range(len(self.simplices)), 3)
        )

    def witness_verified(self) -> bool:
        """z_v in P_v for every place, and each S_j misses some z_v."""
        if self.witness is None:
            return False
        inside = all(
            realgeom.contains_point(part, z) for part, z in zip(self.polytope.infinite_parts, self.witness)
        )
        uncovered = all(
            any(not realgeom.contains_point(S.infinite_parts[v], z) for v, z in enumerate(self.witness))
            for S in self.simplices
        )
        return inside and uncovered

    def to_record(self) -> dict:
        labels = self.simplex_labels
        return {
            "example": self.name,
            "field": self.polytope.field.label,
            "simplices": labels,
            "simplex_volumes": [adelic_volume(S, MeasureConvention.PROOF).to_record() for S in self.simplices],
            "pairs": [
                {
                    "pair": [labels[i] for i in entry.pair],
                    "place_overlaps": [str(w) for w in entry.place_overlaps],
                    "volume_zero": entry.volume_zero,
                }
                for entry in self.table
            ],
            "pairs_volume_zero": sum(entry.volume_zero for entry in self.table),
            "all_pairs_disjoint": self.all_pairs_disjoint,
            "max_disjoint_selection": [labels[i] for i in self.selection],
            "every_triple_overlaps": self.every_triple_overlaps,
            "witness": None if self.witness is None else [
                {"place": f"v{z.place + 1}", "coords": [format_rational(x.coords[0]) for x in z.coords]}
                for z in self.witness
            ],
            "witness_verified": self.witness_verified(),
            "triangulation": {
                "place": f"v{self.certificate.place + 1}",
                "k": self.certificate.k,
                "m": self.certificate.m,
                "simplices": ["".join(LABELS[i] for i in s) for s in self.certificate.simplices],
                "holds": self.certificate.holds,
            },
        }


def _simplex_example(name: str, points: List[Point], field: NumberField) -> SimplexExampleReport:
    P = adelic_hull(field, 2, points)
    triples = list(itertools.combinations(range(len(points)), 3))
    simplices = [adelic_hull(field, 2, [points[i] for i in triple]) for triple in triples]
    labels = ["".join(LABELS[i] for i in triple) for triple in triples]
    table = disjointness_table(simplices)
    selection = max_disjoint_selection(simplices)
    witness = find_uncovered_witness(P, simplices)
    _lifted, certificate = adelic_triangulation(P, 0)
    report = SimplexExampleReport(name, P, simplices, labels, table, selection, witness, certificate)
    logger.info(
        f"{name}: {sum(e.volume_zero for e in table)} of {len(table)} pairs volume-disjoint, "
        f"max selection {len(selection)}, witness {'found' if witness else 'missing'}"
    )
    return report


def example1() -> SimplexExampleReport:
    field = sqrt2_field()
    return _simplex_example("example1", example1_points(field), field)


def example2() -> SimplexExampleReport:
    field = sqrt2_field()
    return _simplex_example("example2", example2_points(field), field)


def run_example(name: str):
    if name == "figure1":
        return figure1()
    if name == "example1":
        return example1()
    if name == "example2":
        return example2()
    raise ValueError(f"unknown example {name!r}")

