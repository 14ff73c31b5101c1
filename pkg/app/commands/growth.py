from typing import TextIO

from app.commands import cap, emit, load, options, require_format
from app.core.exceptions import ParseError
from app.schemas.report import GrowthRecord
from app.services.adelic import growth_experiment
from app.services.plotting import table_csv


def run(args, out: TextIO) -> int:
    fmt = require_format(args, "json", "csv")
    spec, body = load(args)
    k_max = args.k_max or options(spec).k_max
    if k_max < 4:
        raise ParseError("growth needs k_max >= 4", k_max=k_max)
    result = growth_experiment(body, k_max, cap(args))
    if fmt == "csv":
        out.write(table_csv(["k", "count"], result.rows))
        out.write(f"# exponent={result.exponent:.6f} fit_from={result.fit_from} target={result.target}\n")
        return 0
    record = GrowthRecord(
        rows=[list(row) for row in result.rows],
        exponent=round(result.exponent, 6),
        fit_from=result.fit_from,
        target=result.target,
    )
    emit(out, record.model_dump())
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("growth", parents=parents, help="|kC ∩ K^n| for k = 1..k_max and the fitted exponent")
    parser.add_argument("instance", help="instance file, or - for stdin")
    parser.add_argument("--k-max", dest="k_max", type=int, default=None)
    parser.set_defaults(func=run)
