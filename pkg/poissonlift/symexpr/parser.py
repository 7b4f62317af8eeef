"""
Recursive-descent parser for the expression grammar

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' signed-integer]
    atom   := number | identifier | 'sqrt' '(' expr ')' | '(' expr ')' | '-' atom

Numbers are integers or decimals; decimals are read as exact rationals.
"""

import re
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Set

import sympy as sp

from poissonlift.exceptions import ExprSyntaxError, UnknownFunctionError, UnknownVariableError
from poissonlift.symexpr.algebra import Sqrt

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
NUMBER = re.compile(r"[0-9]+(\.[0-9]+)?")
OPERATORS = "+-*/^()"


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "id", "op", "end"
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in OPERATORS:
            tokens.append(Token("op", ch, pos))
            pos += 1
            continue
        match = NUMBER.match(text, pos)
        if match:
            tokens.append(Token("num", match.group(0), pos))
            pos = match.end()
            continue
        match = IDENTIFIER.match(text, pos)
        if match:
            tokens.append(Token("id", match.group(0), pos))
            pos = match.end()
            continue
        raise ExprSyntaxError(pos, {"number", "identifier", "operator"}, ch)
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    """Parses one expression; optional names restrict the admissible identifiers"""

    def __init__(self, text: str, names: Optional[Iterable[str]] = None):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.names: Optional[Set[str]] = set(names) if names is not None else None

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.kind != "op" or token.text != text:
            raise ExprSyntaxError(token.offset, {repr(text)}, token.text)
        return self.advance()

    def parse(self) -> sp.Expr:
        result = self.parse_expr()
        token = self.peek()
        if token.kind != "end":
            raise ExprSyntaxError(token.offset, {"'+'", "'-'", "'*'", "'/'", "end of input"}, token.text)
        return result

    def parse_expr(self) -> sp.Expr:
        result = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.parse_term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def parse_term(self) -> sp.Expr:
        result = self.parse_factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance()
            rhs = self.parse_factor()
            if op.text == "*":
                result = result * rhs
            else:
                if rhs == 0:
                    raise ExprSyntaxError(op.offset, {"nonzero divisor"}, "0")
                result = result / rhs
        return result

    def parse_factor(self) -> sp.Expr:
        base = self.parse_atom()
        token = self.peek()
        if token.kind == "op" and token.text == "^":
            self.advance()
            exponent = self.parse_signed_integer()
            if base == 0 and exponent < 0:
                raise ExprSyntaxError(token.offset, {"nonzero base"}, "0")
            return base**exponent
        return base

    def parse_signed_integer(self) -> int:
        sign = 1
        token = self.peek()
        if token.kind == "op" and token.text in "+-":
            sign = -1 if token.text == "-" else 1
            self.advance()
            token = self.peek()
        if token.kind != "num" or "." in token.text:
            raise ExprSyntaxError(token.offset, {"integer"}, token.text)
        self.advance()
        return sign * int(token.text)

    def parse_atom(self) -> sp.Expr:
        token = self.peek()
        if token.kind == "num":
            self.advance()
            return sp.Rational(token.text)
        if token.kind == "id":
            self.advance()
            follow = self.peek()
            if follow.kind == "op" and follow.text == "(":
                if token.text != "sqrt":
                    raise UnknownFunctionError(token.text, token.offset)
                self.advance()
                inner = self.parse_expr()
                self.expect(")")
                return Sqrt(inner)
            if token.text == "sqrt":
                raise ExprSyntaxError(follow.offset, {"'('"}, follow.text)
            if self.names is not None and token.text not in self.names:
                raise UnknownVariableError(token.text, token.offset)
            return sp.Symbol(token.text)
        if token.kind == "op" and token.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if token.kind == "op" and token.text == "-":
            self.advance()
            return -self.parse_atom()
        raise ExprSyntaxError(token.offset, {"number", "identifier", "'('", "'-'", "'sqrt'"}, token.text)


def parse(text: str, names: Optional[Iterable[str]] = None) -> sp.Expr:
    """Parse expression text; with names, undeclared identifiers are rejected"""
    return Parser(text, names).parse()
