from typing import TextIO

from app.commands import emit, load, options, require_format
from app.core.exceptions import ParseError
from app.schemas.report import TriangulationRecord
from app.services.adelic import adelic_triangulation, triangulation_volume_bound
from app.services.numberfield import format_rational
from app.services.plotting import table_csv


def run(args, out: TextIO) -> int:
    fmt = require_format(args, "json", "csv")
    spec, body = load(args)
    place = (args.place or options(spec).place) - 1
    if not 0 <= place < body.field.r:
        raise ParseError(f"place v{place + 1} does not exist", places=body.field.r)
    _simplices, certificate = adelic_triangulation(body, place)
    bound = triangulation_volume_bound(body, place)
    if fmt == "csv":
        out.write(table_csv(["simplex", "generators"], [
            [k, " ".join(str(i) for i in simplex)] for k, simplex in enumerate(certificate.simplices)
        ]))
        return 0
    record = TriangulationRecord(
        place=f"v{place + 1}",
        k=certificate.k,
        m=certificate.m,
        simplices=[list(simplex) for simplex in certificate.simplices],
        pairwise_volume_zero=certificate.pairwise_volume_zero,
        volume_sum_matches=certificate.volume_sum_matches,
        contained_everywhere=certificate.contained_everywhere,
        holds=certificate.holds,
        volume=bound.volume.to_record(),
        volume_lower_bound=format_rational(bound.lower_bound),
        volume_bound_holds=bound.holds,
    )
    emit(out, record.model_dump(exclude_none=True))
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "triangulate", parents=parents, help="lift a placing triangulation at one place to adelic simplices"
    )
    parser.add_argument("instance", help="instance file, or - for stdin")
    parser.add_argument("--place", type=int, default=None, help="real place, 1-based (v1 is the largest root)")
    parser.set_defaults(func=run)
