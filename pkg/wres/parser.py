# wres/parser.py
"""Recursive-descent parser for the ASCII polynomial grammar.

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | "+" unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | IDENT | "(" expr ")"
"""
import re

from sympy import QQ

from .algebra import Ring, rat
from .exceptions import PolySyntaxError

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^/()]))")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolySyntaxError(f"unexpected character {text[offset]!r}", offset)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.at = 0

    def peek(self):
        return self.tokens[self.at]

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise PolySyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.at += 1
        return tok

    def parse(self):
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolySyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return result

    def expr(self):
        acc = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return -self.unary()
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            exponent = self.take("int")
            return base ** int(exponent[1])
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            num = int(tok[1])
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take("int")
                if int(den[1]) == 0:
                    raise PolySyntaxError("zero denominator", den[2])
                return self.ring.const(QQ(num, int(den[1])))
            return self.ring.const(num)
        if tok[0] == "ident":
            self.take()
            if tok[1] not in self.ring.names:
                raise PolySyntaxError(f"unknown variable {tok[1]!r}", tok[2])
            return self.ring.gen(tok[1])
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise PolySyntaxError(f"unexpected {tok[1] or 'end of input'!r}", tok[2])


def variables_in(text):
    """Identifiers in order of first appearance."""
    seen = []
    for kind, value, _ in tokenize(text):
        if kind == "ident" and value not in seen:
            seen.append(value)
    return seen


def parse(text, ring=None):
    """Parse polynomial text; without a ring, variables are taken in order of appearance."""
    if ring is None:
        names = variables_in(text) or ["x"]
        ring = Ring(tuple(names))
    elif not isinstance(ring, Ring):
        ring = parse_ring(ring)
    return _Parser(text, ring).parse()


def parse_ring(text, truncation=None):
    names = [n.strip() for n in text.split(",") if n.strip()]
    for n in names:
        if not _IDENT.match(n):
            raise PolySyntaxError(f"invalid variable name {n!r}", text.find(n))
    return Ring(tuple(names), truncation)


def parse_ideal(text, ring):
    """Comma-separated generators."""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise PolySyntaxError("empty ideal", 0)
    return [parse(p, ring) for p in parts]


def parse_point(text, ring=None):
    values = [rat(v) for v in text.split(",") if v.strip()]
    if ring is not None and len(values) != ring.ngens:
        raise ValueError(f"point {text!r} has {len(values)} coordinates, ring has {ring.ngens}")
    return tuple(values)
