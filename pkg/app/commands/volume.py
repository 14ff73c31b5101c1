from typing import TextIO

from app.commands import emit, load, require_format
from app.schemas.report import VolumeRecord
from app.services import omodule, realgeom
from app.services.adelic import MeasureConvention, adelic_volume
from app.services.numberfield import format_rational
from app.services.plotting import render_svg, table_csv


def run(args, out: TextIO) -> int:
    fmt = require_format(args, "json", "csv", "svg")
    _spec, body = load(args)
    proof = adelic_volume(body, MeasureConvention.PROOF)
    discriminant = adelic_volume(body, MeasureConvention.DISCRIMINANT)
    if fmt == "svg":
        out.write(render_svg(body))
        return 0
    if fmt == "csv":
        rows = []
        for name, value in (("proof", proof), ("discriminant", discriminant)):
            lo, hi = value.interval_record()
            exact = value.exact()
            rows.append([name, "" if exact is None else exact, lo, hi, repr(float(value))])
        out.write(table_csv(["convention", "exact", "lo", "hi", "float"], rows))
        return 0
    selected = proof if body.convention == MeasureConvention.PROOF else discriminant
    record = VolumeRecord(
        field=body.field.label,
        n=body.n,
        convention=body.convention.value,
        value=selected.to_record(),
        proof=proof.to_record(),
        discriminant=discriminant.to_record(),
        finite_volume=format_rational(omodule.finite_volume(body.finite_part)),
        place_volumes=[str(realgeom.place_volume(P)) for P in body.infinite_parts],
    )
    emit(out, record.model_dump(exclude_none=True))
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "volume", parents=parents, help="exact adelic volume under both measure conventions"
    )
    parser.add_argument("instance", help="instance file, or - for stdin")
    parser.set_defaults(func=run)
