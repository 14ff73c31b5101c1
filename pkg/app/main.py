import argparse
import json
import logging
import sys
from typing import List, Optional, TextIO

import sentry_sdk

from app.commands import check, count, example, growth, rational, triangulate, volume
from app.config import settings
from app.core.exceptions import AdelicError, ParseError
from app.core.monitoring import init_error_tracking, setup_logging
from app.services.numberfield import format_rational

logger = logging.getLogger(__name__)

COMMANDS = (volume, count, check, example, growth, triangulate)


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # on subcommands the flags default to SUPPRESS so they never clobber values given before the subcommand
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--convention", choices=["proof", "discriminant"], default=default(None),
                        help="measure convention (default: the instance's)")
    parser.add_argument("--format", choices=["json", "csv", "svg"], default=default("json"))
    parser.add_argument("--precision", type=rational, default=default(None),
                        help="embedding interval width, e.g. 1/10^12 as 1/1000000000000")
    parser.add_argument("--cap", type=int, default=default(None), help="maximum enumeration candidates")
    parser.add_argument("--log-level", dest="log_level", default=default(None))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adelic",
        description="Exact volumes, lattice-point counts and Blichfeldt-type bounds for adelic polytopes.",
    )
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.APP_VERSION}")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers, [common])
    return parser


def _apply_overrides(args: argparse.Namespace) -> None:
    if args.precision is not None:
        if args.precision <= 0:
            raise ParseError("--precision must be positive")
        settings.EMBED_WIDTH = format_rational(args.precision)
    if args.cap is not None:
        if args.cap <= 0:
            raise ParseError("--cap must be positive")
        settings.CANDIDATE_CAP = args.cap


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(args.log_level)
    init_error_tracking()
    saved = (settings.EMBED_WIDTH, settings.CANDIDATE_CAP)
    try:
        _apply_overrides(args)
        logger.info(f"{args.command}: start")
        return args.func(args, out)
    except AdelicError as exc:
        logger.info(f"{args.command}: {type(exc).__name__}: {exc.detail}")
        record = exc.to_record()
        record["exit_code"] = exc.exit_code
        sys.stderr.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
        return exc.exit_code
    except Exception as exc:
        logger.exception(f"{args.command}: unexpected error")
        sentry_sdk.capture_exception(exc)
        sys.stderr.write(json.dumps({"error": "InternalError", "detail": str(exc), "exit_code": 1}) + "\n")
        return 1
    finally:
        settings.EMBED_WIDTH, settings.CANDIDATE_CAP = saved


if __name__ == "__main__":
    sys.exit(main())
