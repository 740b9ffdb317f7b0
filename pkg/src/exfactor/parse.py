"""Recursive-descent parser and canonical formatter for polynomial expressions.

Grammar: integer literals, variables x and y, operators + - * ^, and
parentheses; ^ takes a nonnegative integer literal exponent. Columns in
errors are 1-based.
"""
from __future__ import annotations

from .errors import ParseError
from .polynomials import BivarPolyZ

__all__ = ["parse_poly", "format_poly"]

_TOKEN_CHARS = {"+", "-", "*", "^", "(", ")"}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0  # 0-based index into text
        self.tokens: list[tuple[str, str, int]] = []  # (kind, value, column)
        self._scan()
        self.idx = 0

    def _scan(self):
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            col = i + 1
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", text[i:j], col))
                i = j
            elif ch in ("x", "y"):
                self.tokens.append(("var", ch, col))
                i += 1
            elif ch in _TOKEN_CHARS:
                self.tokens.append((ch, ch, col))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", col, "digit, variable, or operator")
        self.tokens.append(("end", "", len(text) + 1))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.idx]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.idx]
        if tok[0] != "end":
            self.idx += 1
        return tok


def parse_poly(text: str) -> BivarPolyZ:
    """Parse an expression into its expanded canonical term map."""
    lex = _Lexer(text)
    poly = _parse_expr(lex)
    kind, value, col = lex.peek()
    if kind != "end":
        raise ParseError(f"unexpected {value!r}", col, "operator or end of input")
    return poly


def _parse_expr(lex: _Lexer) -> BivarPolyZ:
    sign = 1
    kind, _, _ = lex.peek()
    if kind in ("+", "-"):
        lex.next()
        if kind == "-":
            sign = -1
    acc = _parse_term(lex) * sign
    while True:
        kind, _, _ = lex.peek()
        if kind == "+":
            lex.next()
            acc = acc + _parse_term(lex)
        elif kind == "-":
            lex.next()
            acc = acc - _parse_term(lex)
        else:
            return acc


def _parse_term(lex: _Lexer) -> BivarPolyZ:
    acc = _parse_factor(lex)
    while lex.peek()[0] == "*":
        lex.next()
        acc = acc * _parse_factor(lex)
    return acc


def _parse_factor(lex: _Lexer) -> BivarPolyZ:
    base = _parse_atom(lex)
    if lex.peek()[0] == "^":
        lex.next()
        kind, value, col = lex.next()
        if kind != "int":
            raise ParseError(f"unexpected {value if value else 'end of input'!r}", col, "nonnegative integer exponent")
        return base ** int(value)
    return base


def _parse_atom(lex: _Lexer) -> BivarPolyZ:
    kind, value, col = lex.next()
    if kind == "int":
        return BivarPolyZ.const(int(value))
    if kind == "var":
        return BivarPolyZ.var(value)
    if kind == "(":
        inner = _parse_expr(lex)
        kind2, value2, col2 = lex.next()
        if kind2 != ")":
            raise ParseError(f"unexpected {value2 if value2 else 'end of input'!r}", col2, "')'")
        return inner
    shown = value if value else "end of input"
    raise ParseError(f"unexpected {shown!r}", col, "integer, variable, or '('")


def _format_monomial(i: int, j: int) -> str:
    parts = []
    if i == 1:
        parts.append("x")
    elif i > 1:
        parts.append(f"x^{i}")
    if j == 1:
        parts.append("y")
    elif j > 1:
        parts.append(f"y^{j}")
    return "*".join(parts)


def format_poly(poly: BivarPolyZ) -> str:
    """Canonical text form, parseable by parse_poly (terms in descending lex order)."""
    if poly.is_zero:
        return "0"
    pieces = []
    for (i, j) in sorted(poly.terms, reverse=True):
        c = poly.terms[(i, j)]
        mono = _format_monomial(i, j)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)
