"""Error hierarchy. Every error carries the process exit code the CLI reports."""
from typing import Any, Optional


class AdelicError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context = context

    def to_record(self) -> dict:
        record = {"error": type(self).__name__, "detail": self.detail}
        record.update({k: str(v) for k, v in self.context.items()})
        return record


class ParseError(AdelicError):
    exit_code = 2


class InvalidFieldError(ParseError):
    """Minimal polynomial rejected (not monic, reducible, not squarefree)."""


class ClassNumberError(ParseError):
    """A global module was requested without asserting class number one."""


class DegenerateError(AdelicError):
    exit_code = 3


class NotTotallyRealError(DegenerateError):
    pass


class CandidateCapExceeded(AdelicError):
    exit_code = 3


class UnresolvedComparisonError(AdelicError):
    exit_code = 3


class HypothesisError(AdelicError):
    exit_code = 3

    def __init__(self, detail: str, check: Optional[Any] = None, **context: Any):
        super().__init__(detail, **context)
        self.check = check


class BoundViolation(AdelicError):
    """A verifier returned a report whose inequality does not hold."""

    exit_code = 4

    def __init__(self, detail: str, report: Optional[Any] = None, **context: Any):
        super().__init__(detail, **context)
        self.report = report
