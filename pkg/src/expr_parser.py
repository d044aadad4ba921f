"""Recursive-descent parser for generator expressions such as ``e[1,1] f[1,1] - 2*K[1]^-1``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List

from .errors import ExpressionError
from .qfield import QF, q_power
from .ubase import AlgebraElement, QuantumAlgebra

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()\[\],;]))"
)


@dataclass
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    text = text.rstrip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise ExpressionError(f"unexpected character {text[position]!r} at position {position}")
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    """Grammar:

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/")? unary)*        juxtaposition multiplies
    unary  := "-" unary | power
    power  := atom ("^" "-"? number)?
    atom   := number | "q" | "(" expr ")" | e[node,level] | f[node,level] | K[node] | q[h,...(;d,...)]
    """

    def __init__(self, algebra: QuantumAlgebra, text: str) -> None:
        self.algebra = algebra
        self.datum = algebra.datum
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _fail(self, message: str) -> ExpressionError:
        return ExpressionError(f"{message} at position {self.current.position} in {self.text!r}")

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _expect(self, text: str) -> None:
        if self.current.text != text:
            raise self._fail(f"expected {text!r}")
        self._advance()

    def _integer(self) -> int:
        sign = 1
        if self.current.text == "-":
            self._advance()
            sign = -1
        if self.current.kind != "number":
            raise self._fail("expected an integer")
        return sign * int(self._advance().text)

    def parse(self) -> AlgebraElement:
        if self.current.kind == "end":
            raise self._fail("empty expression")
        value = self.expr()
        if self.current.kind != "end":
            raise self._fail(f"unexpected {self.current.text!r}")
        return value

    def expr(self) -> AlgebraElement:
        value = self.term()
        while self.current.text in ("+", "-"):
            op = self._advance().text
            right = self.term()
            value = value + right if op == "+" else value - right
        return value

    def _starts_unary(self) -> bool:
        token = self.current
        return token.kind in ("number", "name") or token.text == "("

    def term(self) -> AlgebraElement:
        value = self.unary()
        while True:
            if self.current.text == "*":
                self._advance()
                value = self.algebra.multiply(value, self.unary())
            elif self.current.text == "/":
                self._advance()
                value = value.scale(QF.one / self._scalar_of(self.unary()))
            elif self._starts_unary():
                value = self.algebra.multiply(value, self.unary())
            else:
                return value

    def unary(self) -> AlgebraElement:
        if self.current.text == "-":
            self._advance()
            return self.unary().scale(-1)
        return self.power()

    def power(self) -> AlgebraElement:
        base = self.atom()
        if self.current.text != "^":
            return base
        self._advance()
        exponent = self._integer()
        if exponent < 0:
            base = self._inverse(base)
            exponent = -exponent
        result = self.algebra.one()
        for _ in range(exponent):
            result = self.algebra.multiply(result, base)
        return result

    def _scalar_of(self, value: AlgebraElement):
        zero = self.algebra.zero_torus
        if len(value) != 1 or next(iter(value)) != ((), zero, ()):
            raise self._fail("division is only defined by nonzero scalars")
        return value[((), zero, ())]

    def _inverse(self, value: AlgebraElement) -> AlgebraElement:
        if len(value) != 1:
            raise self._fail("only scalars and torus monomials have inverses")
        (fword, torus, eword), coefficient = next(iter(value.items()))
        if fword or eword:
            raise self._fail("only scalars and torus monomials have inverses")
        return self.algebra.torus(tuple(-x for x in torus)).scale(QF.one / coefficient)

    def _node(self) -> int:
        token = self._advance()
        if token.kind not in ("number", "name"):
            raise self._fail("expected a node name")
        try:
            return self.datum.node_index(token.text)
        except KeyError as exc:
            raise ExpressionError(str(exc)) from exc

    def atom(self) -> AlgebraElement:
        token = self.current
        if token.kind == "number":
            self._advance()
            return self.algebra.scalar(int(token.text))
        if token.text == "(":
            self._advance()
            value = self.expr()
            self._expect(")")
            return value
        if token.kind != "name":
            raise self._fail(f"unexpected {token.text!r}")
        self._advance()
        name = token.text
        if name == "q" and self.current.text != "[":
            return self.algebra.scalar(q_power(1))
        self._expect("[")
        if name in ("e", "f"):
            i = self._node()
            self._expect(",")
            level = self._integer()
            self._expect("]")
            try:
                return self.algebra.generator(name, i, level)
            except ValueError as exc:
                raise ExpressionError(str(exc)) from exc
        if name == "K":
            i = self._node()
            self._expect("]")
            return self.algebra.k_element(i)
        if name == "q":
            return self.algebra.torus(self._torus_vector())
        raise ExpressionError(f"unknown generator {name!r} at position {token.position}")

    def _torus_vector(self) -> List[int]:
        rank = self.datum.rank
        h_part = [self._integer()]
        while self.current.text == ",":
            self._advance()
            h_part.append(self._integer())
        d_part = [0] * rank
        if self.current.text == ";":
            self._advance()
            d_part = [self._integer()]
            while self.current.text == ",":
                self._advance()
                d_part.append(self._integer())
        self._expect("]")
        if len(h_part) != rank or len(d_part) != rank:
            raise ExpressionError(f"q[...] needs {rank} h-coordinates and optionally {rank} d-coordinates")
        return h_part + d_part


def parse_expression(algebra: QuantumAlgebra, text: str) -> AlgebraElement:
    return ExpressionParser(algebra, text).parse()
