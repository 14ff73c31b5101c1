"""`check`: bound verification, one Celery task per instance file."""
import logging
from typing import List, TextIO

from app.commands import emit, read_text, require_format
from app.core.exceptions import BoundViolation
from app.schemas.report import BoundErrorRecord, BoundReportRecord
from app.services.bounds import VERIFIERS
from app.services.instances import load_instance
from app.services.plotting import table_csv
from app.workers.tasks import verify_instance

logger = logging.getLogger(__name__)

BOUND_CHOICES = ["all", *VERIFIERS]


def _submit(args, text: str):
    spec = load_instance(text)
    if args.convention:
        spec = spec.model_copy(update={"convention": args.convention})
    bound = args.bound or (spec.options.bound if spec.options else "all")
    return verify_instance.delay(spec.to_canonical_json(), bound, args.cap or 0)


def combined_exit_code(codes: List[int]) -> int:
    """A violation anywhere wins; otherwise the worst missing verdict."""
    if BoundViolation.exit_code in codes:
        return BoundViolation.exit_code
    return max(codes, default=0)


def run(args, out: TextIO) -> int:
    fmt = require_format(args, "json", "csv")
    pending = [_submit(args, read_text(path)) for path in args.instances]
    results = [task.get() for task in pending]

    rows: List[list] = []
    for path, result in zip(args.instances, results):
        for record in result["reports"]:
            record["instance"] = path
            rhs = record["rhs"]
            rows.append([
                path,
                record["bound_name"],
                record["lhs"],
                rhs.get("exact") or "",
                " ".join(rhs.get("interval", [])),
                record["holds"],
                record["strict"],
            ])
        if fmt == "json":
            for record in result["reports"]:
                emit(out, BoundReportRecord.model_validate(record).model_dump(exclude_none=True))
            for record in result["errors"]:
                record["instance"] = path
                emit(out, BoundErrorRecord.model_validate(record).model_dump(exclude_none=True))
    if fmt == "csv":
        out.write(table_csv(["instance", "bound", "lhs", "rhs_exact", "rhs_interval", "holds", "strict"], rows))
    exit_code = combined_exit_code([result["exit_code"] for result in results])
    logger.info(f"check: {len(results)} instances, exit {exit_code}")
    return exit_code


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("check", parents=parents, help="verify Blichfeldt-type bounds")
    parser.add_argument("instances", nargs="+", help="instance files, or - for stdin")
    parser.add_argument("--bound", choices=BOUND_CHOICES, default=None,
                        help="one verifier, or all applicable ones (default: the instance option, else all)")
    parser.set_defaults(func=run)
