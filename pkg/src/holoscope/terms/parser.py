"""Parser for the term language.

    term      := "sum" varlist ":" product
    varlist   := ident ("," ident)*
    product   := atom (("*" | "/") atom)*
    atom      := const "^" var | factorial | "binom" "(" form "," form ")" ["^" expo]
    factorial := "(" form ")" "!" ["^" expo] | ident "!" ["^" expo]

A constant is an integer or a rational literal, bare (``3/2^k``) or in
parentheses (``(-1)^k``); its exponent names ``n`` or a summation variable.
``X!^e`` is shorthand for |e| copies of X! with sign sgn(e); dividing by an
atom flips its signs. ``#`` starts a comment.

Example::

    >>> t = parse_term("sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2")
    >>> [s for _, s in t.factors]
    [1, 1, -1, -1, -1, -1, -1, -1]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .model import BalancedTerm, LinearForm


class TermParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


class TermSyntaxError(TermParseError):
    pass


class UnknownVariableError(TermParseError):
    pass


class NonIntegerCoefficientError(TermParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # INT, DEC, IDENT, OP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    r"|(?P<DEC>\d+\.\d*|\.\d+)|(?P<INT>\d+)|(?P<IDENT>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<OP>[()\[\],:*/^!+\-])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.vars: list[str] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None, cls=TermSyntaxError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    # grammar
    def parse(self) -> BalancedTerm:
        if not (self.tok.kind == "IDENT" and self.tok.text == "sum"):
            raise self.error("a term must start with 'sum'")
        self.advance()
        while True:
            t = self.tok
            if t.kind != "IDENT":
                raise self.error("expected a summation variable name")
            if t.text in ("n", "sum", "binom"):
                raise self.error(f"{t.text!r} is reserved and cannot be a summation variable")
            if t.text in self.vars:
                raise self.error(f"duplicate summation variable {t.text!r}")
            self.vars.append(t.text)
            self.advance()
            if self.at(","):
                self.advance()
                continue
            break
        self.expect(":")
        r = len(self.vars)
        c0 = Fraction(1)
        cs = [Fraction(1)] * r
        factors: list[tuple[LinearForm, int]] = []
        sign = 1
        while True:
            kind, payload = self.atom()
            if kind == "const":
                value, var, start = payload
                if sign < 0:
                    value = 1 / value
                if var == "n":
                    c0 *= value
                else:
                    cs[self.vars.index(var)] *= value
            else:
                for form, s in payload:
                    factors.append((form, s * sign))
            if self.at("*"):
                self.advance()
                sign = 1
            elif self.at("/"):
                self.advance()
                sign = -1
            elif self.tok.kind == "EOF":
                break
            else:
                raise self.error(f"expected '*', '/' or end of input, found {self.tok.text!r}")
        if not factors:
            raise self.error("a term needs at least one factorial or binomial factor")
        return BalancedTerm(c0, tuple(cs), tuple(factors), tuple(self.vars))

    def _rational_literal(self, sign_allowed: bool = True) -> Fraction | None:
        """Try to read [-]INT[/INT] followed by '^'; rewind on failure."""
        start = self.i
        neg = False
        if sign_allowed and self.at("-"):
            neg = True
            self.advance()
        if self.tok.kind == "DEC":
            raise self.error("constants must be rational literals", cls=NonIntegerCoefficientError)
        if self.tok.kind != "INT":
            self.i = start
            return None
        num = int(self.advance().text)
        den = 1
        if self.at("/") and self.peek().kind == "INT":
            self.advance()
            den = int(self.advance().text)
            if den == 0:
                raise self.error("zero denominator in constant")
        return Fraction(-num if neg else num, den)

    def atom(self):
        t = self.tok
        # parenthesized constant  (p/q)^var
        if self.at("("):
            save = self.i
            self.advance()
            value = self._rational_literal()
            if value is not None and self.at(")") and self.peek().text == "^":
                self.advance()
                return "const", self.const_exponent(value, t)
            self.i = save
            open_tok = self.advance()
            form = self.form()
            if not self.at(")"):
                found = self.tok.text or "end of input"
                raise TermSyntaxError(
                    f"unclosed parenthesis (found {found!r} at line {self.tok.line}, column {self.tok.col})",
                    open_tok.line, open_tok.col)
            self.advance()
            if not self.at("!"):
                raise self.error("expected '!' after a parenthesized form")
            self.advance()
            return "fact", self.with_exponent([(form, 1)])
        if t.kind == "IDENT" and t.text == "binom":
            self.advance()
            open_tok = self.expect("(")
            top = self.form()
            self.expect(",")
            bottom = self.form()
            if not self.at(")"):
                raise TermSyntaxError("unclosed parenthesis in binom", open_tok.line, open_tok.col)
            self.advance()
            return "fact", self.with_exponent([(top, 1), (bottom, -1), (top - bottom, -1)])
        if t.kind == "IDENT":
            form = self.variable_form(t)
            self.advance()
            if not self.at("!"):
                raise self.error(f"expected '!' after {t.text!r}")
            self.advance()
            return "fact", self.with_exponent([(form, 1)])
        if t.kind in ("INT", "DEC") or self.at("-"):
            value = self._rational_literal()
            if value is None:
                raise self.error(f"unexpected {t.text!r}")
            if not self.at("^"):
                raise self.error("a constant must be raised to n or a summation variable")
            return "const", self.const_exponent(value, t)
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def const_exponent(self, value: Fraction, start: Token):
        self.expect("^")
        neg = False
        if self.at("-"):
            neg = True
            self.advance()
        t = self.tok
        if t.kind != "IDENT":
            raise self.error("a constant's exponent must be n or a summation variable")
        if t.text != "n" and t.text not in self.vars:
            raise self.error(f"unknown variable {t.text!r}", cls=UnknownVariableError)
        self.advance()
        if value == 0:
            raise TermSyntaxError("constants must be nonzero", start.line, start.col)
        return (1 / value if neg else value), t.text, start

    def with_exponent(self, parts):
        if not self.at("^"):
            return parts
        self.advance()
        neg = False
        if self.at("-"):
            neg = True
            self.advance()
        elif self.at("+"):
            self.advance()
        if self.tok.kind != "INT":
            raise self.error("exponent must be an integer")
        e = int(self.advance().text) * (-1 if neg else 1)
        out = []
        for form, s in parts:
            out += [(form, s if e > 0 else -s)] * abs(e)
        return out

    # linear forms
    def variable_form(self, t: Token) -> LinearForm:
        r = len(self.vars)
        if t.text == "n":
            return LinearForm(1, (0,) * r, 0)
        if t.text in self.vars:
            idx = self.vars.index(t.text)
            return LinearForm(0, tuple(int(i == idx) for i in range(r)), 0)
        raise self.error(f"unknown variable {t.text!r}", t, UnknownVariableError)

    def form(self) -> LinearForm:
        neg = False
        if self.at("-"):
            neg = True
            self.advance()
        elif self.at("+"):
            self.advance()
        acc = self.form_term()
        if neg:
            acc = -acc
        while self.at("+") or self.at("-"):
            op = self.advance().text
            rhs = self.form_term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def form_term(self) -> LinearForm:
        acc = self.form_factor()
        while True:
            if self.at("*"):
                star = self.advance()
                rhs = self.form_factor()
                if _is_const(acc):
                    acc = rhs.scale(acc.constant)
                elif _is_const(rhs):
                    acc = acc.scale(rhs.constant)
                else:
                    raise self.error("product of two variables is not linear", star)
            elif self.at("/"):
                raise self.error("division inside a linear form", cls=NonIntegerCoefficientError)
            elif self.tok.kind == "IDENT" and self.tok.text != "binom" and _is_const(acc):
                # juxtaposition such as 2n
                rhs = self.form_factor()
                acc = rhs.scale(acc.constant)
            else:
                return acc

    def form_factor(self) -> LinearForm:
        t = self.tok
        r = len(self.vars)
        if t.kind == "INT":
            self.advance()
            return LinearForm(0, (0,) * r, int(t.text))
        if t.kind == "DEC":
            raise self.error(f"non-integer coefficient {t.text!r}", cls=NonIntegerCoefficientError)
        if t.kind == "IDENT":
            self.advance()
            return self.variable_form(t)
        if self.at("-"):
            self.advance()
            return -self.form_factor()
        if self.at("("):
            open_tok = self.advance()
            inner = self.form()
            if not self.at(")"):
                raise TermSyntaxError("unclosed parenthesis", open_tok.line, open_tok.col)
            self.advance()
            return inner
        found = t.text or "end of input"
        raise self.error(f"expected a linear form, found {found!r}")


def _is_const(f: LinearForm) -> bool:
    return f.coeff_n == 0 and not any(f.coeff_k)


def parse_term(text: str) -> BalancedTerm:
    """Parse the term language into a :class:`BalancedTerm` (balance is not checked here)."""
    return _Parser(text).parse()
