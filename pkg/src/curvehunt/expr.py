"""Tokenizer and parser for curve equations and function expressions.

Grammar (juxtaposition binds tighter than explicit ``*`` and ``/``, so
``1/x(x^2+x+1)`` means 1/(x(x^2+x+1)) and ``2x^5`` means 2*x^5)::

    equation := sum '=' sum
    sum      := ['-'] term (('+' | '-') term)*
    term     := juxt (('*' | '/') juxt)*
    juxt     := power power*
    power    := atom ['^' integer]
    atom     := integer | name | '(' sum ')'

Names are single letters with optional trailing digits (``xz`` is x*z, ``y1``
is one name); all are variables except ``a``, the generator of the
coefficient field.
Values are multivariate rational functions ``(num, den)`` over the field, with
polynomials stored as dicts mapping exponent tuples to field ints.
"""

from __future__ import annotations

import re

from .ff import Field


class ParseError(ValueError):
    """Syntax error; ``pos`` is the 0-based character offset."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][0-9]*)|(.))")


def tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()=;,":
                raise ParseError(f"unexpected character {ch!r}", start)
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


# -- multivariate polynomials ------------------------------------------------------

class MPolyRing:
    """Polynomials over F in a fixed tuple of variables."""

    def __init__(self, F: Field, names):
        self.F = F
        self.names = tuple(names)
        self.nv = len(self.names)

    def const(self, c: int) -> dict:
        return {(0,) * self.nv: c} if c else {}

    def var(self, name: str) -> dict:
        i = self.names.index(name)
        e = [0] * self.nv
        e[i] = 1
        return {tuple(e): 1}

    def add(self, A: dict, B: dict) -> dict:
        F = self.F
        out = dict(A)
        for k, v in B.items():
            s = F.add(out.get(k, 0), v)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def neg(self, A: dict) -> dict:
        return {k: self.F.neg(v) for k, v in A.items()}

    def sub(self, A: dict, B: dict) -> dict:
        return self.add(A, self.neg(B))

    def mul(self, A: dict, B: dict) -> dict:
        F = self.F
        out: dict = {}
        for ka, va in A.items():
            for kb, vb in B.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                s = F.add(out.get(k, 0), F.mul(va, vb))
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def scale(self, A: dict, c: int) -> dict:
        if c == 0:
            return {}
        return {k: self.F.mul(v, c) for k, v in A.items()}

    def pow(self, A: dict, e: int) -> dict:
        out = self.const(1)
        base = A
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def is_const(self, A: dict) -> bool:
        return all(not any(k) for k in A)

    def const_value(self, A: dict) -> int:
        return A.get((0,) * self.nv, 0)

    def degree_in(self, A: dict, name: str) -> int:
        i = self.names.index(name)
        return max((k[i] for k in A), default=-1)

    def uses(self, A: dict) -> set:
        out = set()
        for k in A:
            for i, e in enumerate(k):
                if e:
                    out.add(self.names[i])
        return out


class Parser:
    """Recursive-descent parser producing rational functions over F."""

    def __init__(self, text: str, F: Field, names):
        self.text = text
        self.F = F
        self.R = MPolyRing(F, names)
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, ch):
        t = self.take()
        if t[0] != "op" or t[1] != ch:
            what = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {ch!r}, found {what}", t[2])

    # rational arithmetic
    def r_add(self, a, b):
        R = self.R
        if a[1] == b[1]:
            return (R.add(a[0], b[0]), a[1])
        return (R.add(R.mul(a[0], b[1]), R.mul(b[0], a[1])), R.mul(a[1], b[1]))

    def r_neg(self, a):
        return (self.R.neg(a[0]), a[1])

    def r_mul(self, a, b):
        R = self.R
        return (R.mul(a[0], b[0]), R.mul(a[1], b[1]))

    def r_div(self, a, b, pos):
        R = self.R
        if not b[0]:
            raise ParseError("division by zero", pos)
        return (R.mul(a[0], b[1]), R.mul(a[1], b[0]))

    def r_pow(self, a, e):
        R = self.R
        return (R.pow(a[0], e), R.pow(a[1], e))

    # grammar
    def parse_sum(self):
        t = self.peek()
        neg = False
        if t[0] == "op" and t[1] in "+-":
            self.take()
            neg = t[1] == "-"
        acc = self.parse_term()
        if neg:
            acc = self.r_neg(acc)
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                rhs = self.parse_term()
                acc = self.r_add(acc, rhs if t[1] == "+" else self.r_neg(rhs))
            else:
                return acc

    def parse_term(self):
        acc = self.parse_juxt()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "*/":
                self.take()
                rhs = self.parse_juxt()
                acc = self.r_mul(acc, rhs) if t[1] == "*" else self.r_div(acc, rhs, t[2])
            else:
                return acc

    def _starts_atom(self, t):
        return t[0] in ("num", "name") or (t[0] == "op" and t[1] == "(")

    def parse_juxt(self):
        acc = self.parse_power()
        while self._starts_atom(self.peek()):
            acc = self.r_mul(acc, self.parse_power())
        return acc

    def parse_power(self):
        base = self.parse_atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", e[2])
            base = self.r_pow(base, e[1])
        return base

    def parse_atom(self):
        t = self.take()
        R = self.R
        one = R.const(1)
        if t[0] == "num":
            return (R.const(t[1] % self.F.p), one)
        if t[0] == "name":
            if t[1] == "a":
                if self.F.k == 1:
                    raise ParseError("the symbol 'a' needs an extension field", t[2])
                return (R.const(self.F.generator()), one)
            if t[1] not in R.names:
                raise ParseError(f"unknown variable {t[1]!r}", t[2])
            return (R.var(t[1]), one)
        if t[0] == "op" and t[1] == "(":
            v = self.parse_sum()
            self.expect_op(")")
            return v
        what = "end of input" if t[0] == "end" else repr(t[1])
        raise ParseError(f"unexpected {what}", t[2])

    def parse_expression(self):
        v = self.parse_sum()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return v

    def parse_equation(self):
        lhs = self.parse_sum()
        self.expect_op("=")
        if self.peek()[0] == "end":
            raise ParseError("missing right-hand side", self.peek()[2])
        rhs = self.parse_sum()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return lhs, rhs


def variable_names(text: str) -> list[str]:
    """Variable names occurring in text (excluding the field symbol a)."""
    out = []
    for kind, val, _ in tokenize(text):
        if kind == "name" and val != "a" and val not in out:
            out.append(val)
    return out
