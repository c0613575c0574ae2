"""Dense univariate and bivariate polynomials over the rationals.

Coefficients are stored lowest degree first as ``fractions.Fraction``.
Degrees in this domain stay small (well under 100), so everything is dense
and written for clarity rather than speed.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Rational = Fraction


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Immutable dense polynomial with rational coefficients.

    >>> p = Poly([2, -7, 2])        # 2 - 7x + 2x^2
    >>> p.degree, p(Fraction(1, 2))
    (2, Fraction(-1, 1))
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim([Fraction(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # construction helpers
    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable, lc=1) -> "Poly":
        p = cls([lc])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic
    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = _as_poly(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.lc
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[: other.degree])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    # evaluation
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc if self.coeffs else Fraction(0)

    def evalf(self, x, ctx=None):
        """Horner evaluation with coefficients converted through ``ctx.mpf``."""
        import mpmath

        ctx = ctx or mpmath.mp
        acc = ctx.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + ctx.mpf(c.numerator) / c.denominator
        return acc

    # calculus and transforms
    def derivative(self, k: int = 1) -> "Poly":
        p = self
        for _ in range(k):
            p = Poly([i * c for i, c in enumerate(p.coeffs)][1:])
        return p

    def shift(self, c) -> "Poly":
        """Return p(x + c) (Taylor shift)."""
        c = Fraction(c)
        out = Poly()
        lin = Poly([c, 1])
        for coeff in reversed(self.coeffs):
            out = out * lin + Poly([coeff])
        return out

    def compose(self, q: "Poly") -> "Poly":
        out = Poly()
        for coeff in reversed(self.coeffs):
            out = out * q + Poly([coeff])
        return out

    def valuation(self) -> int:
        """Order of vanishing at x = 0 (-1 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    # normalization
    def content(self) -> Fraction:
        """Positive rational c with self / c primitive with integer coefficients."""
        if not self.coeffs:
            return Fraction(0)
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(gcd, (c.numerator * (den // c.denominator) for c in self.coeffs), 0)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        """Integer coefficients, content 1, positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return Poly([x / c for x in self.coeffs])

    def monic(self) -> "Poly":
        return Poly([c / self.lc for c in self.coeffs])

    def int_coeffs(self) -> list[int]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly([x])
    return NotImplemented


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: pairwise coprime squarefree primitive factors with multiplicities.

    The product of ``f**m`` over the result equals ``p`` up to a rational constant.
    """
    if p.degree < 1:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree >= 1:
        g = poly_gcd(b, d)
        if g.degree >= 1:
            out.append((g.primitive(), i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def multiplicity(p: Poly, f: Poly) -> int:
    """Largest m with f**m | p (p nonzero, deg f >= 1)."""
    if not p:
        raise ValueError("multiplicity in the zero polynomial is undefined")
    m = 0
    while True:
        q, r = divmod(p, f)
        if r:
            return m
        p = q
        m += 1


class BiPoly:
    """Polynomial in two variables (lam, alpha); ``coeffs[i][j]`` multiplies lam^i alpha^j."""

    __slots__ = ("coeffs",)

    def __init__(self, rows: Iterable[Iterable] = ()):
        mat = [[Fraction(c) for c in row] for row in rows]
        width = 0
        for row in mat:
            for j in range(len(row) - 1, -1, -1):
                if row[j]:
                    width = max(width, j + 1)
                    break
        mat = [row[:width] + [Fraction(0)] * (width - len(row)) for row in mat]
        while mat and not any(mat[-1]):
            mat.pop()
        if not mat:
            width = 0
        object.__setattr__(self, "coeffs", tuple(tuple(r) for r in mat))

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def from_alpha_rows(cls, rows: Sequence[Poly]) -> "BiPoly":
        """Build from polynomials in alpha indexed by the power of lam."""
        width = max((len(r.coeffs) for r in rows), default=0)
        return cls([[r[j] for j in range(width)] for r in rows])

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Poly, Poly]]) -> "BiPoly":
        """Sum of products lam_poly(lam) * alpha_poly(alpha)."""
        acc: dict[tuple[int, int], Fraction] = {}
        for lp, ap in terms:
            for i, a in enumerate(lp.coeffs):
                for j, b in enumerate(ap.coeffs):
                    acc[(i, j)] = acc.get((i, j), Fraction(0)) + a * b
        if not acc:
            return cls()
        di = max(i for i, _ in acc) + 1
        dj = max(j for _, j in acc) + 1
        return cls([[acc.get((i, j), 0) for j in range(dj)] for i in range(di)])

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"BiPoly({[[str(c) for c in r] for r in self.coeffs]})"

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def deg_lambda(self) -> int:
        return len(self.coeffs) - 1

    @property
    def deg_alpha(self) -> int:
        return max((len(r) for r in self.coeffs), default=0) - 1

    def lambda_coeff(self, i: int) -> Poly:
        """Coefficient of lam^i as a polynomial in alpha."""
        if 0 <= i < len(self.coeffs):
            return Poly(self.coeffs[i])
        return Poly()

    def alpha_coeff(self, j: int) -> Poly:
        """Coefficient of alpha^j as a polynomial in lam."""
        return Poly([row[j] if j < len(row) else 0 for row in self.coeffs])

    def at_alpha(self, a) -> Poly:
        """Specialize alpha, leaving a polynomial in lam."""
        return Poly([Poly(row)(Fraction(a)) for row in self.coeffs])

    def reduce_lambda(self, m: Poly) -> "BiPoly":
        """Reduce every alpha-coefficient modulo m(lam)."""
        cols = [self.alpha_coeff(j) % m for j in range(self.deg_alpha + 1)]
        return BiPoly.from_terms((c, Poly.monomial(j)) for j, c in enumerate(cols))
