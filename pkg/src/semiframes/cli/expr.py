"""Tiny arithmetic grammar for sequence and grid rules.

Grammar: numbers, one free variable (``n`` or ``x``), ``+ - * / ^`` and
parentheses; ``^`` is right-associative power.  Rules compile to plain
Python callables of one float argument.
"""

import re

from ..errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[()+\-*/^]))"
)

_ALLOWED_VARS = ("n", "x")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"bad character {text[pos]!r} in rule {text!r}")
        if match.group("num") is not None:
            tokens.append(("num", float(match.group("num"))))
        elif match.group("name") is not None:
            name = match.group("name")
            if name not in _ALLOWED_VARS:
                raise ParseError(
                    f"unknown symbol {name!r} in rule {text!r}; use 'n' or 'x'"
                )
            tokens.append(("var", name))
        else:
            tokens.append(("op", match.group("op")))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.text = text
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        token = self.peek()
        if token is None:
            raise ParseError(f"unexpected end of rule {self.text!r}")
        self.pos += 1
        return token

    def expect_op(self, symbol):
        token = self.take()
        if token != ("op", symbol):
            raise ParseError(f"expected {symbol!r} in rule {self.text!r}")

    def parse(self):
        node = self.sum()
        if self.peek() is not None:
            raise ParseError(f"trailing tokens in rule {self.text!r}")
        return node

    def sum(self):
        node = self.product()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.product()
            node = (op, node, rhs)
        return node

    def product(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            node = (op, node, rhs)
        return node

    def unary(self):
        if self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = self.unary()
            return node if op == "+" else ("neg", node)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exponent = self.unary()  # right-associative, allows -2 exponents
            return ("^", base, exponent)
        return base

    def atom(self):
        kind, value = self.take()
        if kind == "num":
            return ("num", value)
        if kind == "var":
            return ("var",)
        if (kind, value) == ("op", "("):
            node = self.sum()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {value!r} in rule {self.text!r}")


def _evaluate(node, value):
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "var":
        return value
    if tag == "neg":
        return -_evaluate(node[1], value)
    left = _evaluate(node[1], value)
    right = _evaluate(node[2], value)
    if tag == "+":
        return left + right
    if tag == "-":
        return left - right
    if tag == "*":
        return left * right
    if tag == "/":
        return left / right
    return left**right


def compile_rule(text):
    """Compile a rule string into a callable of one numeric argument."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("rule must be a non-empty string")
    ast = _Parser(_tokenize(text), text).parse()

    def rule(value):
        return float(_evaluate(ast, float(value)))

    return rule
