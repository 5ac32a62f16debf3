"""Pull PDDL domain and problem blocks out of free-form model output.

Model answers wrap the PDDL in prose, headers, and (sometimes) code
fences. The scanner finds the first ``(define (domain`` / ``(define
(problem`` and walks matching parentheses, skipping ``;`` comments so a
paren inside a comment cannot break the balance.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass


class MissingDomain(Exception):
    pass


class MissingProblem(Exception):
    pass


class UnbalancedExpression(Exception):
    """The expression starting at ``offset`` never closes."""

    def __init__(self, offset: int):
        self.offset = offset
        super().__init__(f"unbalanced expression starting at offset {offset}")


class ExtraBlocksWarning(UserWarning):
    """More than one block of the same kind; the first one is used."""


@dataclass(frozen=True)
class Extraction:
    domain_text: str
    problem_text: str
    rationale: str


_DOMAIN_RE = re.compile(r"\(\s*define\s*\(\s*domain\b", re.IGNORECASE)
_PROBLEM_RE = re.compile(r"\(\s*define\s*\(\s*problem\b", re.IGNORECASE)


def _scan_balanced(text: str, start: int) -> int:
    """Index one past the paren closing the expression opened at ``start``."""
    depth = 0
    i = start
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == ";":
            newline = text.find("\n", i)
            if newline == -1:
                break
            i = newline + 1
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    raise UnbalancedExpression(start)


def _find_blocks(text: str, pattern: re.Pattern) -> list[tuple[int, int]]:
    spans = []
    pos = 0
    while True:
        match = pattern.search(text, pos)
        if match is None:
            return spans
        end = _scan_balanced(text, match.start())
        spans.append((match.start(), end))
        pos = end


def extract_pddl(text: str) -> Extraction:
    """Split a model answer into domain, problem, and rationale.

    Raises MissingDomain / MissingProblem when a block is absent and
    UnbalancedExpression when one never closes. With several blocks of
    the same kind the first wins and a warning is emitted.
    """
    domain_spans = _find_blocks(text, _DOMAIN_RE)
    if not domain_spans:
        raise MissingDomain("no '(define (domain' block found")
    problem_spans = _find_blocks(text, _PROBLEM_RE)
    if not problem_spans:
        raise MissingProblem("no '(define (problem' block found")
    if len(domain_spans) > 1:
        warnings.warn(
            f"{len(domain_spans)} domain blocks found; using the first",
            ExtraBlocksWarning,
            stacklevel=2,
        )
    if len(problem_spans) > 1:
        warnings.warn(
            f"{len(problem_spans)} problem blocks found; using the first",
            ExtraBlocksWarning,
            stacklevel=2,
        )
    dspan = domain_spans[0]
    pspan = problem_spans[0]
    remainder = []
    cut = sorted([dspan, pspan])
    prev = 0
    for lo, hi in cut:
        remainder.append(text[prev:lo])
        prev = hi
    remainder.append(text[prev:])
    return Extraction(
        domain_text=text[dspan[0] : dspan[1]],
        problem_text=text[pspan[0] : pspan[1]],
        rationale="".join(remainder).strip(),
    )
