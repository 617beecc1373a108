"""Concrete LTL syntax.

Atoms `[a-z_][a-z0-9_]*`; operators `!` `&` `|` `->` `X` `U` `F` `G`;
`true`/`false` literals; parentheses. Precedence, tightest first:
unary (`!`, `X`, `F`, `G`), `U` (right-assoc), `&`, `|`, `->`
(right-assoc). Specification files hold one `name: formula` per line.
"""

from __future__ import annotations

import re
from collections.abc import Iterable

from .formula import (
    FALSE,
    TRUE,
    Always,
    Atom,
    Eventually,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    And,
    Until,
    normalize,
)


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownAtomError(ValueError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown atom '{name}' (at position {position})")
        self.name = name


_TOKEN_RE = re.compile(r"\s*(->|[!&|()XUFG]|[a-z_][a-z0-9_]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or not m.group(1):
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise LtlSyntaxError(f"unexpected character {rest[0]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int]], alphabet: frozenset[str], length: int):
        self.tokens = tokens
        self.alphabet = alphabet
        self.i = 0
        self.length = length

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.length

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise LtlSyntaxError(f"expected {tok!r}, found {self.peek()!r}", self.pos())
        self.take()

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        node = self.parse_and()
        while self.peek() == "|":
            self.take()
            node = Or((node, self.parse_and()))
        return node

    def parse_and(self) -> Formula:
        node = self.parse_until()
        while self.peek() == "&":
            self.take()
            node = And((node, self.parse_until()))
        return node

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        if self.peek() == "U":
            self.take()
            return Until(left, self.parse_until())
        return left

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise LtlSyntaxError("unexpected end of input", self.pos())
        if tok == "!":
            self.take()
            return Not(self.parse_unary())
        if tok == "X":
            self.take()
            return Next(self.parse_unary())
        if tok == "F":
            self.take()
            return Eventually(self.parse_unary())
        if tok == "G":
            self.take()
            return Always(self.parse_unary())
        if tok == "(":
            self.take()
            node = self.parse_implies()
            self.expect(")")
            return node
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if re.fullmatch(r"[a-z_][a-z0-9_]*", tok):
            pos = self.pos()
            self.take()
            if tok not in self.alphabet:
                raise UnknownAtomError(tok, pos)
            return Atom(tok)
        raise LtlSyntaxError(f"unexpected token {tok!r}", self.pos())


def parse(text: str, alphabet: Iterable[str]) -> Formula:
    """Parse and normalize a formula; every atom must be in `alphabet`."""
    tokens = _tokenize(text)
    parser = _Parser(tokens, frozenset(alphabet), len(text))
    node = parser.parse_implies()
    if parser.peek() is not None:
        raise LtlSyntaxError(f"trailing input {parser.peek()!r}", parser.pos())
    return normalize(node)


def load_spec_file(path: str, alphabet: Iterable[str]) -> dict[str, Formula]:
    """Read `name: formula` lines (UTF-8); blank lines and `#` comments skipped."""
    out: dict[str, Formula] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            name, sep, body = line.partition(":")
            if not sep or not name.strip():
                raise ValueError(f"{path}:{lineno}: expected 'name: formula'")
            out[name.strip()] = parse(body, alphabet)
    return out
