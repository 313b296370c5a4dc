"""Surface syntax for polynomials and frequencies.

Grammar (whitespace-insensitive)::

    expr   :=  term (('+' | '-') term)*
    term   :=  factor (('*' factor) | ('/' NUMBER))*
    factor :=  ('-' | '+') factor | NUMBER | NUMBER 'i' | 'i'
             | 'e' '(' freq ')' | '(' expr ')'
    freq   :=  ['-' | '+'] fterm (('+' | '-') fterm)*
    fterm  :=  rat ['*' LABEL] | LABEL ['*' rat | '/' INT]
    rat    :=  INT ['/' INT]

Coefficients are complex floats (``2.5``, ``1e-3``, ``3i``, ``2+3i``);
frequency arguments are exact rational combinations of declared basis
labels only, so no floating point ever leaks into the spectrum.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import APPolynomial, Frequency, FrequencyBasis
from .errors import ExpressionError, NegativeFrequencyError

_TOKEN = re.compile(r"""
    (?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/(),])
  | (?P<ws>\s+)
""", re.VERBOSE)


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"{self.kind}({self.text!r}@{self.pos})"


def _tokenize(text: str) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionError(f"bad character {text[pos]!r}", position=pos)
        if m.lastgroup == "num":
            out.append(_Token("num", m.group(), pos))
        elif m.lastgroup == "name":
            out.append(_Token("name", m.group(), pos))
        elif m.lastgroup == "op":
            out.append(_Token(m.group(), m.group(), pos))
        pos = m.end()
    out.append(_Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, basis: FrequencyBasis):
        self.text = text
        self.basis = basis
        self.tokens = _tokenize(text)
        self.i = 0

    # -- token plumbing ---------------------------------------------------

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        if self.cur.kind != kind:
            raise ExpressionError(
                f"expected {kind!r}, found {self.cur.text!r}",
                position=self.cur.pos)
        return self.advance()

    def fail(self, message: str):
        raise ExpressionError(message, position=self.cur.pos)

    # -- polynomial level ----------------------------------------------------

    def parse_poly(self) -> APPolynomial:
        value = self.expr()
        if self.cur.kind != "end":
            self.fail(f"trailing input {self.cur.text!r}")
        return value

    def expr(self) -> APPolynomial:
        value = self.term()
        while self.cur.kind in "+-":
            op = self.advance().kind
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> APPolynomial:
        value = self.factor()
        while self.cur.kind in "*/":
            op = self.advance().kind
            if op == "*":
                value = value * self.factor()
            else:
                tok = self.expect("num")
                d = float(tok.text)
                if d == 0.0:
                    raise ExpressionError("division by zero", position=tok.pos)
                value = value * (1.0 / d)
        return value

    def factor(self) -> APPolynomial:
        tok = self.cur
        if tok.kind in "+-":
            self.advance()
            inner = self.factor()
            return inner if tok.kind == "+" else -inner
        if tok.kind == "num":
            self.advance()
            scalar = float(tok.text)
            if self.cur.kind == "name" and self.cur.text == "i":
                self.advance()
                return APPolynomial.constant(self.basis, scalar * 1j)
            return APPolynomial.constant(self.basis, scalar)
        if tok.kind == "name" and tok.text == "i":
            self.advance()
            return APPolynomial.constant(self.basis, 1j)
        if tok.kind == "name" and tok.text == "e":
            self.advance()
            self.expect("(")
            freq = self.freq()
            self.expect(")")
            sign = freq.sign()
            if sign < 0:
                raise NegativeFrequencyError(
                    f"negative frequency {freq.as_text()} in {self.text!r}")
            return APPolynomial.exponential(self.basis, freq)
        if tok.kind == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        self.fail(f"unexpected {tok.text!r}")

    # -- frequency level -------------------------------------------------------

    def parse_frequency(self) -> Frequency:
        value = self.freq()
        if self.cur.kind != "end":
            self.fail(f"trailing input {self.cur.text!r}")
        return value

    def freq(self) -> Frequency:
        sign = 1
        if self.cur.kind in "+-":
            sign = -1 if self.advance().kind == "-" else 1
        value = self.fterm().scale(sign)
        while self.cur.kind in "+-":
            op = self.advance().kind
            rhs = self.fterm()
            value = value + rhs.scale(-1 if op == "-" else 1)
        return value

    def fterm(self) -> Frequency:
        tok = self.cur
        if tok.kind == "num":
            q = self.rat()
            if self.cur.kind == "*":
                self.advance()
                label = self.expect("name").text
                return self.basis.frequency({label: q})
            return self.basis.frequency(q)
        if tok.kind == "name":
            label = self.advance().text
            q = Fraction(1)
            if self.cur.kind == "*":
                self.advance()
                q = self.rat()
            elif self.cur.kind == "/":
                self.advance()
                q = Fraction(1) / self.int_tok()
            return self.basis.frequency({label: q})
        self.fail(f"expected a rational or basis label, found {tok.text!r}")

    def rat(self) -> Fraction:
        num = self.int_tok()
        if self.cur.kind == "/":
            self.advance()
            den = self.int_tok()
            if den == 0:
                self.fail("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def int_tok(self) -> int:
        tok = self.expect("num")
        if not tok.text.isdigit():
            raise ExpressionError(
                f"frequencies must be exact rationals, got {tok.text!r}",
                position=tok.pos)
        return int(tok.text)


def parse_ap_expression(text: str, basis: FrequencyBasis) -> APPolynomial:
    """Parse the surface syntax into a normalized polynomial."""
    return _Parser(text, basis).parse_poly()


def parse_frequency(text: str, basis: FrequencyBasis) -> Frequency:
    """Parse an exact rational basis combination like ``3/2 + 2*s``."""
    return _Parser(text, basis).parse_frequency()


def _render_complex(c: complex) -> str:
    re_, im = c.real, c.imag
    if im == 0.0:
        return f"({re_!r})"
    sign = "+" if im >= 0 else "-"
    return f"({re_!r}{sign}{abs(im)!r}i)"


def render_frequency(freq: Frequency) -> str:
    parts = []
    unit = freq.basis.labels[0]
    for label, q in zip(freq.basis.labels, freq.coords):
        if q == 0:
            continue
        mag = abs(q)
        if label == unit:
            body = str(mag)
        elif mag == 1:
            body = label
        else:
            body = f"{mag}*{label}"
        if not parts:
            parts.append(body if q > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if q > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def render(p: APPolynomial) -> str:
    """Deterministic textual form; ``parse_ap_expression`` round-trips it
    exactly (float coefficients via repr)."""
    if p.is_zero:
        return "(0.0)*e(0)"
    parts = []
    for freq in p.spectrum():
        c = p.coefficient(freq)
        parts.append(f"{_render_complex(c)}*e({render_frequency(freq)})")
    return " + ".join(parts)
