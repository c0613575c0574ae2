"""Rational roots, certified complex root isolation and factorization over Q.

Complex roots are approximated with ``mpmath.polyroots`` and then certified
exactly: for a squarefree f of degree n with distinct approximations z_i,
the disks D(z_i, n |W_i|), with W_i = f(z_i) / (lc * prod_{j != i}(z_i - z_j))
the Weierstrass corrections, cover all roots, and every connected component
made of k disks holds exactly k roots. When the disks are pairwise disjoint
each one isolates a single root. W_i is evaluated in exact Gaussian-rational
arithmetic at the (binary, hence rational) approximations, so the radii are
rigorous upper bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath
from mpmath.libmp import to_rational

from .poly import Poly, multiplicity, squarefree_decomposition

DEFAULT_RADIUS = Fraction(1, 10**30)


@dataclass(frozen=True)
class ComplexBox:
    """Closed disk with exact rational center (re, im) and radius."""

    center: tuple[Fraction, Fraction]
    radius: Fraction

    def contains(self, other: "ComplexBox") -> bool:
        d2 = (self.center[0] - other.center[0]) ** 2 + (self.center[1] - other.center[1]) ** 2
        gap = self.radius - other.radius
        return gap >= 0 and d2 <= gap * gap

    def disjoint(self, other: "ComplexBox") -> bool:
        d2 = (self.center[0] - other.center[0]) ** 2 + (self.center[1] - other.center[1]) ** 2
        s = self.radius + other.radius
        return d2 > s * s

    def contains_point(self, re, im=0) -> bool:
        d2 = (self.center[0] - Fraction(re)) ** 2 + (self.center[1] - Fraction(im)) ** 2
        return d2 <= self.radius**2

    def mpc(self, ctx=mpmath.mp):
        re, im = self.center
        return ctx.mpc(ctx.mpf(re.numerator) / re.denominator, ctx.mpf(im.numerator) / im.denominator)


@dataclass(frozen=True)
class IsolatedRoot:
    box: ComplexBox
    multiplicity: int

    @property
    def center(self):
        return self.box.mpc()

    def is_real(self) -> bool:
        return self.box.center[1] == 0 or abs(self.box.center[1]) <= self.box.radius


# rational roots ----------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [0]
    primes: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            primes[d] = primes.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        primes[n] = primes.get(n, 0) + 1
    divs = [1]
    for p, e in primes.items():
        divs = [x * p**k for x in divs for k in range(e + 1)]
    return sorted(divs)


def rational_roots(p: Poly) -> list[Fraction]:
    """All rational roots of p, repeated according to multiplicity, ascending.

    Candidates come from the rational root theorem (numerator divides the
    trailing coefficient, denominator divides the leading one); each is
    confirmed by exact division.
    """
    if not p:
        raise ValueError("rational roots of the zero polynomial")
    p = p.primitive()
    roots: list[Fraction] = []
    v = p.valuation()
    if v > 0:
        roots += [Fraction(0)] * v
        p = Poly(p.coeffs[v:])
    if p.degree < 1:
        return roots
    coeffs = p.int_coeffs()
    cands = set()
    for a in _divisors(coeffs[0]):
        for b in _divisors(coeffs[-1]):
            cands.add(Fraction(a, b))
            cands.add(Fraction(-a, b))
    for c in sorted(cands):
        if p(c) == 0:
            lin = Poly([-c.numerator, c.denominator])
            m = multiplicity(p, lin)
            roots += [c] * m
    return sorted(roots)


# certified isolation ----------------------------------------------------------

def _mpf_to_fraction(x) -> Fraction:
    num, den = to_rational(x._mpf_)
    return Fraction(int(num), int(den))


def _sqrt_upper(q: Fraction, digits: int) -> Fraction:
    """Rational upper bound of sqrt(q) with relative slack about 10^-digits."""
    if q <= 0:
        return Fraction(0)
    bits = int(digits * 3.33) + 8
    log2q = q.numerator.bit_length() - q.denominator.bit_length()
    k = max(0, (2 * bits + 2 - log2q + 1) // 2)
    val = q * 4**k
    n = -(-val.numerator // val.denominator)
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 2**k)


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _eval_complex(p: Poly, z):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p.coeffs):
        acc = _cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _certify(f: Poly, approx, digits: int):
    """Exact Weierstrass-disk radii for the approximations of a squarefree f."""
    n = f.degree
    zs = [(_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)) for z in approx]
    if len(set(zs)) < n:
        return None
    lc = f.lc
    boxes = []
    for i, zi in enumerate(zs):
        num = _eval_complex(f, zi)
        num2 = num[0] ** 2 + num[1] ** 2
        den2 = lc * lc
        for j, zj in enumerate(zs):
            if j != i:
                d = (zi[0] - zj[0], zi[1] - zj[1])
                den2 *= d[0] ** 2 + d[1] ** 2
        w2 = num2 / den2
        radius = n * _sqrt_upper(w2, digits)
        boxes.append(ComplexBox(zi, radius))
    return boxes


def _squarefree_boxes(f: Poly, radius: Fraction) -> list[ComplexBox]:
    if f.degree == 1:
        r = -f[0] / f[1]
        return [ComplexBox((r, Fraction(0)), Fraction(0))]
    digits = 40
    want = float(radius) if radius > 0 else 0.0
    while True:
        ctx = mpmath.MPContext()
        ctx.dps = digits
        coeffs = [ctx.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)]
        try:
            approx = ctx.polyroots(coeffs, maxsteps=200 + 20 * f.degree, extraprec=4 * digits)
        except ctx.NoConvergence:
            approx = None
        if approx is not None:
            approx = [ctx.mpc(z) for z in approx]
            boxes = _certify(f, approx, digits)
            if boxes is not None:
                ok = all(b.radius <= radius for b in boxes)
                ok = ok and all(a.disjoint(b) for a, b in itertools.combinations(boxes, 2))
                if ok:
                    return boxes
        digits *= 2
        if digits > 20000:
            raise ArithmeticError(f"root isolation did not converge for {f} (radius {want})")


def _sort_key(b: ComplexBox):
    return (b.center[0], b.center[1])


def isolate_roots(p: Poly, radius: Fraction = DEFAULT_RADIUS) -> list[IsolatedRoot]:
    """One certified disk per distinct complex root of p, with multiplicities.

    Disks are pairwise disjoint, have radius at most ``radius`` and are sorted
    by the real then imaginary part of their centers.
    """
    if not p:
        raise ValueError("roots of the zero polynomial")
    radius = Fraction(radius)
    if p.degree < 1:
        return []
    out = []
    for f, m in squarefree_decomposition(p):
        out += [IsolatedRoot(b, m) for b in _squarefree_boxes(f, radius)]
    boxes = [r.box for r in out]
    # roots of different squarefree parts are distinct; shrink until disjoint
    r = radius
    while not all(a.disjoint(b) for a, b in itertools.combinations(boxes, 2)):
        r /= 10**10
        out = []
        for f, m in squarefree_decomposition(p):
            out += [IsolatedRoot(b, m) for b in _squarefree_boxes(f, r)]
        boxes = [x.box for x in out]
    return sorted(out, key=lambda x: _sort_key(x.box))


# factorization ----------------------------------------------------------------

def _quadratic_split(f: Poly) -> tuple[Poly, Poly] | None:
    """Split a primitive quartic without rational roots into two rational quadratics, if possible."""
    roots = [r.center for r in isolate_roots(f, Fraction(1, 10**40))]
    lc = f.int_coeffs()[-1]
    divs = _divisors(lc)
    for i, j in itertools.combinations(range(4), 2):
        s = roots[i] + roots[j]
        pr = roots[i] * roots[j]
        for a in divs:
            b = mpmath.nint(-a * s.real)
            c = mpmath.nint(a * pr.real)
            if abs(a * s.real + b) > 1e-20 or abs(a * s.imag) > 1e-20 or abs(a * pr.imag) > 1e-20:
                continue
            q = Poly([int(c), int(b), a])
            quo, rem = divmod(f, q)
            if not rem:
                return q.primitive(), quo.primitive()
    return None


def factor_rational(p: Poly) -> list[tuple[Poly, int]]:
    """Factor p over Q into primitive factors with multiplicities.

    Squarefree decomposition, then rational-root stripping; residual blocks of
    degree 2 or 3 are irreducible, quartics are tested for a split into two
    quadratics, and higher-degree residual blocks are returned unsplit.
    Factors are sorted by (degree, coefficients).
    """
    if not p:
        raise ValueError("factorization of the zero polynomial")
    out: list[tuple[Poly, int]] = []
    for f, m in squarefree_decomposition(p):
        residual = f
        for r in sorted(set(rational_roots(f))):
            lin = Poly([-r.numerator, r.denominator])
            residual = residual.exact_div(lin)
            out.append((lin.primitive(), m))
        residual = residual.primitive()
        if residual.degree < 1:
            continue
        if residual.degree == 4:
            split = _quadratic_split(residual)
            if split:
                out += [(q, m) for q in split]
                continue
        out.append((residual, m))
    merged: dict[Poly, int] = {}
    for f, m in out:
        merged[f] = merged.get(f, 0) + m
    return sorted(merged.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs))
