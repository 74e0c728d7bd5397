"""Recursive-descent parser for the expression language.

Grammar::

    sum     := product (("+" | "-") product)*
    product := unary ("*" unary)*
    unary   := "-" unary | power
    power   := primary ("^" INT)?
    primary := NUMBER | jetvar | NAME | "sin(" dep ")" | "cos(" dep ")"
             | "D(" sum "," indep ")" | "(" sum ")"
    NUMBER  := INT ("/" INT)?
    jetvar  := dep | dep "_" letters | dep "[" INT ("," INT)* "]"

``NAME`` refers to a previously defined expression (only when an environment
is supplied).  ``D(e, x)`` is the total derivative and is an extension used by
problem files.  There is no implicit multiplication.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .jet import Context, Expr

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)*)
  | (?P<op>[-+*^(),\[\]])
    """,
    re.VERBOSE,
)


def tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: Context, env: dict | None):
        self.text = text
        self.ctx = ctx
        self.env = env or {}
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.next()
        if tok[1] != value or tok[0] not in ("op",):
            self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.error("empty expression")
        e = self.sum()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.next()[1]
            rhs = self.product()
            e = e + rhs if op == "+" else e - rhs
        return e

    def product(self) -> Expr:
        e = self.unary()
        while self.peek()[1] == "*":
            self.next()
            e = e * self.unary()
        return e

    def unary(self) -> Expr:
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.next()
            return -self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek()[1] == "^":
            self.next()
            tok = self.next()
            if tok[1] == "-":
                self.error("negative exponents are not supported", tok)
            if tok[0] != "num" or "/" in tok[1]:
                self.error("exponent must be a non-negative integer", tok)
            return base ** int(tok[1])
        return base

    def primary(self) -> Expr:
        tok = self.next()
        kind, val, pos = tok
        if kind == "num":
            num, _, den = val.partition("/")
            if den and int(den) == 0:
                self.error("division by zero in rational literal", tok)
            return Expr.const(self.ctx, Fraction(int(num), int(den) if den else 1))
        if kind == "op" and val == "(":
            e = self.sum()
            self.expect(")")
            return e
        if kind == "ident":
            if val in ("sin", "cos") and self.peek()[1] == "(":
                return self.trig(val)
            if val == "D" and self.peek()[1] == "(":
                return self.total_derivative()
            if val in self.env:
                return self.env[val]
            return self.jetvar(tok)
        self.error(f"unexpected token {val or 'end of input'!r}", tok)

    def trig(self, fn) -> Expr:
        self.expect("(")
        tok = self.next()
        if tok[0] != "ident":
            self.error(f"{fn} takes a dependent variable of order 0", tok)
        if tok[1] not in self.ctx.dep:
            if tok[1].split("_")[0] in self.ctx.dep or self.peek()[1] == "[":
                self.error(f"{fn} of a derivative is not supported; argument must have order 0", tok)
            self.error(f"unknown dependent variable {tok[1]!r}", tok)
        self.expect(")")
        dep = self.ctx.dep.index(tok[1])
        return self.ctx.sin(dep) if fn == "sin" else self.ctx.cos(dep)

    def total_derivative(self) -> Expr:
        from .calculus import total_derivative

        self.expect("(")
        e = self.sum()
        self.expect(",")
        tok = self.next()
        if tok[0] != "ident" or tok[1] not in self.ctx.indep:
            self.error(f"expected an independent variable, found {tok[1]!r}", tok)
        self.expect(")")
        return total_derivative(e, tok[1])

    def jetvar(self, tok) -> Expr:
        val = tok[1]
        base, _, suffix = val.partition("_")
        if base not in self.ctx.dep:
            if base in self.ctx.indep:
                self.error(f"independent variable {base!r} cannot appear in an expression", tok)
            self.error(f"unknown variable {val!r}", tok)
        dep = self.ctx.dep.index(base)
        if suffix:
            counts = [0] * self.ctx.p
            for ch in suffix:
                if ch not in self.ctx.indep:
                    self.error(f"{ch!r} in {val!r} is not an independent variable", tok)
                counts[self.ctx.indep.index(ch)] += 1
            return Expr.jet(self.ctx, dep, counts)
        if self.peek()[1] == "[":
            self.next()
            counts = []
            while True:
                t = self.next()
                if t[0] != "num" or "/" in t[1]:
                    self.error("multi-index entries must be non-negative integers", t)
                counts.append(int(t[1]))
                t = self.next()
                if t[1] == "]":
                    break
                if t[1] != ",":
                    self.error("expected ',' or ']' in multi-index", t)
            if len(counts) != self.ctx.p:
                self.error(f"multi-index needs {self.ctx.p} entries, got {len(counts)}", tok)
            return Expr.jet(self.ctx, dep, counts)
        return Expr.jet(self.ctx, dep, (0,) * self.ctx.p)


def parse_expr(text: str, ctx: Context, env: dict | None = None) -> Expr:
    """Parse *text* into a canonical expression over *ctx*.

    *env* maps names to already-built expressions that may be referenced.
    """
    return _Parser(text, ctx, env).parse()
