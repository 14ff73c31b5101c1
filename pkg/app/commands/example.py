from typing import TextIO

from app.commands import emit, require_format
from app.core.exceptions import ParseError
from app.services.plotting import figure_csv, render_svg, table_csv
from app.services.reproductions import EXAMPLE_NAMES, FigureReport, run_example


def run(args, out: TextIO) -> int:
    fmt = require_format(args, "json", "csv", "svg")
    report = run_example(args.name)
    if isinstance(report, FigureReport):
        if fmt == "svg":
            out.write(render_svg(report.body, window=args.window, labels=args.labels))
        elif fmt == "csv":
            out.write(figure_csv(report.body, window=args.window))
        else:
            emit(out, report.to_record())
        return 0

    if fmt == "svg":
        raise ParseError(f"{args.name} has no figure; use --format json or csv")
    record = report.to_record()
    if fmt == "csv":
        rows = [
            ["+".join(pair["pair"]), *pair["place_overlaps"], pair["volume_zero"]]
            for pair in record["pairs"]
        ]
        header = ["pair", *(f"overlap_v{v + 1}" for v in range(report.polytope.field.r)), "volume_zero"]
        out.write(table_csv(header, rows))
    else:
        emit(out, record)
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("example", parents=parents, help="reproduce a built-in example")
    parser.add_argument("name", choices=EXAMPLE_NAMES)
    parser.add_argument("--window", type=float, default=None, help="half-width of the plotted window")
    parser.add_argument("--labels", action="store_true", help="label lattice points inside the body")
    parser.set_defaults(func=run)
