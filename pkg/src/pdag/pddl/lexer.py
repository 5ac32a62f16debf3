"""Tokenizer for the PDDL fragment.

A leading ``-`` is always the typed-list separator, but a ``-`` inside a
name is part of the name; the corpus writes both ``?r - room`` and
``?r -room``, so the separator must not require surrounding whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .diagnostics import Diagnostic, Span, error


class TokenKind(Enum):
    LPAREN = "("
    RPAREN = ")"
    NAME = "name"
    VARIABLE = "variable"
    KEYWORD = "keyword"
    DASH = "-"
    EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span

    @property
    def value(self) -> str:
        """Token payload without the sigil (?var and :keyword prefixes)."""
        if self.kind in (TokenKind.VARIABLE, TokenKind.KEYWORD):
            return self.text[1:]
        return self.text


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_WS_RE = re.compile(r"[ \t\r]+")


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line = 1
    col = 1
    i = 0
    n = len(source)

    def emit(kind: TokenKind, text: str) -> None:
        tokens.append(Token(kind, text, Span(line, col, len(text))))

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        ws = _WS_RE.match(source, i)
        if ws:
            col += ws.end() - i
            i = ws.end()
            continue
        if ch == ";":
            end = source.find("\n", i)
            if end == -1:
                end = n
            col += end - i
            i = end
            continue
        if ch == "(":
            emit(TokenKind.LPAREN, "(")
            i += 1
            col += 1
            continue
        if ch == ")":
            emit(TokenKind.RPAREN, ")")
            i += 1
            col += 1
            continue
        if ch == "-":
            emit(TokenKind.DASH, "-")
            i += 1
            col += 1
            continue
        if ch in "?:":
            m = _NAME_RE.match(source, i + 1)
            if m:
                text = ch + m.group(0)
                kind = TokenKind.VARIABLE if ch == "?" else TokenKind.KEYWORD
                emit(kind, text)
                col += len(text)
                i = m.end()
                continue
            diagnostics.append(
                error("lexical-error", f"stray {ch!r} without a following name", Span(line, col, 1))
            )
            i += 1
            col += 1
            continue
        m = _NAME_RE.match(source, i)
        if m:
            text = m.group(0)
            emit(TokenKind.NAME, text)
            col += len(text)
            i = m.end()
            continue
        diagnostics.append(
            error("lexical-error", f"unexpected character {ch!r}", Span(line, col, 1))
        )
        i += 1
        col += 1

    tokens.append(Token(TokenKind.EOF, "", Span(line, col, 0)))
    return tokens, diagnostics
