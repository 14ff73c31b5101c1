"""CLI subcommands. Each module exposes `register(subparsers, parents)`."""
import json
import sys
from argparse import ArgumentTypeError, Namespace
from fractions import Fraction
from typing import Optional, TextIO, Tuple

from app.core.exceptions import ParseError
from app.schemas.instance import InstanceOptions, InstanceSpec
from app.services.adelic import AdelicPolytope, MeasureConvention, with_convention
from app.services.instances import build_body, load_instance


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read instance file {path}: {exc.strerror}") from exc


def load(args: Namespace) -> Tuple[InstanceSpec, AdelicPolytope]:
    """Instance and body, with the global --convention flag taking precedence."""
    spec = load_instance(read_text(args.instance))
    body = build_body(spec)
    if args.convention:
        body = with_convention(body, MeasureConvention(args.convention))
    return spec, body


def options(spec: InstanceSpec) -> InstanceOptions:
    return spec.options or InstanceOptions()


def emit(out: TextIO, record: dict) -> None:
    out.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")


def require_format(args: Namespace, *allowed: str) -> str:
    if args.format not in allowed:
        raise ParseError(f"{args.command} does not support --format {args.format}", allowed=",".join(allowed))
    return args.format


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ArgumentTypeError(f"not a rational: {text!r}") from exc


def cap(args: Namespace) -> Optional[int]:
    return args.cap or None
