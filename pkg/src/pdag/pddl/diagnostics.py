"""Source-anchored diagnostics shared by the lexer, parser and checkers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Span:
    """1-based line/column position plus the length of the offending text."""

    line: int
    column: int
    length: int = 1


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: Span

    def render(self, filename: str = "<input>") -> str:
        return (
            f"{filename}:{self.span.line}:{self.span.column}: "
            f"{self.severity.value}[{self.code}]: {self.message}"
        )

    def __str__(self) -> str:
        return self.render()


def error(code: str, message: str, span: Span) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, span)


def warning(code: str, message: str, span: Span) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, span)
