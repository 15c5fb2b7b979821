"""Diagnostics shared by every stage of the toolchain.

A diagnostic always carries a span into the file it came from. Codes are
stable so that callers and tests can match on them:

    E001  syntax error
    E002  unknown keyword
    E003  unresolved reference
    E004  duplicate sibling name
    E005  schema version mismatch
    E006  element or attribute illegal for the schema version
    W101  attribute dropped by migration
    W102  connector direction mismatch
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True, order=True)
class Span:
    """1-based line/column position plus a length in characters.

    ``offset`` is the 0-based character index into the source; it is kept so
    that services can slice text without recomputing line starts.
    """

    line: int = 1
    column: int = 1
    length: int = 0
    offset: int = 0

    @property
    def end(self) -> int:
        return self.offset + self.length


NO_SPAN = Span()


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    span: Span
    message: str
    hint: Optional[str] = None

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def render(self, path: str = "<input>") -> str:
        line = f"{path}:{self.span.line}:{self.span.column}: {self.severity.value}[{self.code}]: {self.message}"
        if self.hint:
            line += f"\nhint: {self.hint}"
        return line


def error(code: str, span: Span, message: str, hint: Optional[str] = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, span, message, hint)


def warning(code: str, span: Span, message: str, hint: Optional[str] = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, span, message, hint)


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(diagnostics, key=lambda d: (d.span.line, d.span.column))


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


class DiagnosticError(Exception):
    """Raised by operations that refuse to produce output."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.message for d in self.diagnostics))
