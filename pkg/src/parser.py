"""Precedence-climbing parser for expression text.

Grammar: integer literals, declared variable names, ``+ - * / ^`` and parentheses.
``^`` binds tightest and is right-associative, unary minus sits just below it
(``-x^2`` is ``-(x^2)``), and there is no implicit multiplication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .algebra.fields import CoefficientField, QQ
from .algebra.rational import RationalFunction
from .errors import AlgebraError, ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")

BINARY = {"+": (1, "left"), "-": (1, "left"), "*": (2, "left"), "/": (2, "left"), "^": (4, "right")}
UNARY_MINUS = 3


@dataclass(slots=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(source):
        match = _TOKEN.match(source, pos)
        if match is None:
            break
        number, name, symbol = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(Token("int", number, start))
        elif name is not None:
            tokens.append(Token("name", name, start))
        elif symbol is not None:
            if symbol not in BINARY and symbol not in "()":
                raise ParseError(f"unexpected character {symbol!r}", start)
            tokens.append(Token("op", symbol, start))
        pos = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, variables: Sequence[str], field: CoefficientField) -> None:
        self.tokens = tokenize(source)
        self.index = 0
        self.variables = tuple(variables)
        self.field = field

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.advance()
        if token.text != text or token.kind != "op":
            raise ParseError(f"expected {text!r}", token.position)
        return token

    def parse(self) -> RationalFunction:
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0)
        value = self.expression(1)
        token = self.peek()
        if token.kind != "end":
            raise ParseError(f"unexpected {token.text!r}", token.position)
        return value

    def expression(self, min_prec: int) -> RationalFunction:
        lhs = self.unary()
        while True:
            token = self.peek()
            if token.kind != "op" or token.text not in BINARY:
                return lhs
            prec, assoc = BINARY[token.text]
            if prec < min_prec:
                return lhs
            self.advance()
            if token.text == "^":
                lhs = self.power(lhs, token)
                continue
            rhs = self.expression(prec + 1 if assoc == "left" else prec)
            lhs = self.apply(token, lhs, rhs)

    def unary(self) -> RationalFunction:
        token = self.peek()
        if token.kind == "op" and token.text == "-":
            self.advance()
            return -self.expression(UNARY_MINUS)
        return self.atom()

    def exponent(self) -> int:
        # Exponents are plain integers, never field elements.
        token = self.peek()
        if token.kind == "op" and token.text == "(":
            self.advance()
            n = self.exponent()
            self.expect(")")
            return n
        sign = 1
        if token.kind == "op" and token.text == "-":
            self.advance()
            sign = -1
            token = self.peek()
        if token.kind != "int":
            raise ParseError("exponent must be an integer literal", token.position)
        self.advance()
        value = int(token.text)
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text == "^":
            self.advance()
            inner = self.exponent()
            if inner < 0:
                raise ParseError("exponent must be an integer", nxt.position)
            value = value**inner
        return sign * value

    def power(self, base: RationalFunction, token: Token) -> RationalFunction:
        n = self.exponent()
        if n < 0 and base.is_zero():
            raise ParseError("negative power of zero", token.position)
        return base**n

    def apply(self, token: Token, lhs: RationalFunction, rhs: RationalFunction) -> RationalFunction:
        op = token.text
        if op == "+":
            return lhs + rhs
        if op == "-":
            return lhs - rhs
        if op == "*":
            return lhs * rhs
        if rhs.is_zero():
            raise ParseError("division by zero", token.position)
        return lhs / rhs

    def atom(self) -> RationalFunction:
        token = self.advance()
        if token.kind == "int":
            return RationalFunction.constant(self.field, self.variables, int(token.text))
        if token.kind == "name":
            if token.text not in self.variables:
                raise ParseError(f"unknown variable {token.text!r}", token.position)
            return RationalFunction.variable(self.field, self.variables, token.text)
        if token.kind == "op" and token.text == "(":
            value = self.expression(1)
            self.expect(")")
            return value
        if token.kind == "end":
            raise ParseError("unexpected end of input", token.position)
        raise ParseError(f"unexpected {token.text!r}", token.position)


def parse_expression(
    source: str,
    variables: Sequence[str],
    field: Optional[CoefficientField] = None,
) -> RationalFunction:
    """Parse ``source`` into a reduced rational function over ``field`` (QQ by default)."""
    try:
        return _Parser(source, variables, field or QQ).parse()
    except ParseError:
        raise
    except AlgebraError as exc:
        raise ParseError(str(exc)) from exc


def _natural_key(name: str) -> Tuple[str, int, str]:
    match = re.fullmatch(r"(.*?)(\d*)", name)
    stem, digits = match.group(1), match.group(2)
    return stem, int(digits) if digits else -1, name


def free_variables(*sources: str) -> Tuple[str, ...]:
    """Identifiers mentioned in ``sources``, ordered ``x1 < x2 < x10 < y1``."""
    names = {t.text for source in sources for t in tokenize(source) if t.kind == "name"}
    return tuple(sorted(names, key=_natural_key))
