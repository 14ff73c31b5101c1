from fractions import Fraction
from typing import TextIO

from app.commands import cap, emit, load, options, rational, require_format
from app.core.exceptions import AdelicError
from app.schemas.report import CountRecord
from app.services.adelic import dilate, lattice_points
from app.services.numberfield import format_rational
from app.services.plotting import points_csv, render_svg
from app.workers.tasks import count_dilate


class _TaskFailed(AdelicError):
    def __init__(self, record: dict):
        super().__init__(record["detail"])
        self.exit_code = record["exit_code"]
        self.record = record

    def to_record(self) -> dict:
        return {k: v for k, v in self.record.items() if k != "exit_code"}


def run(args, out: TextIO) -> int:
    fmt = require_format(args, "json", "csv", "svg")
    spec, body = load(args)
    opts = options(spec)
    factor = args.dilation if args.dilation is not None else Fraction(opts.dilation)
    if fmt == "svg":
        out.write(render_svg(dilate(body, factor), labels=args.labels))
        return 0
    if fmt == "csv":
        dilated = dilate(body, factor)
        out.write(points_csv(lattice_points(dilated, cap(args)), body.n, body.field.degree))
        return 0

    result = count_dilate.delay(
        spec.to_canonical_json(), format_rational(factor), bool(args.list or opts.list_points), args.cap or 0
    ).get()
    if result["exit_code"]:
        raise _TaskFailed(result["errors"][0])
    record = CountRecord(count=result["count"], dilation=result["dilation"], points=result.get("points"))
    emit(out, record.model_dump(exclude_none=True))
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("count", parents=parents, help="|C ∩ K^n| by embedded-lattice enumeration")
    parser.add_argument("instance", help="instance file, or - for stdin")
    parser.add_argument("--dilation", type=rational, default=None, help="count kC instead of C (rational k > 0)")
    parser.add_argument("--list", action="store_true", help="include the points in the report")
    parser.add_argument("--labels", action="store_true", help="label points in svg output")
    parser.set_defaults(func=run)
