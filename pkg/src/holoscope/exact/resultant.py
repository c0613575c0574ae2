"""Resultants: univariate by Sylvester determinant, bivariate elimination by
evaluation and interpolation."""

from __future__ import annotations

from fractions import Fraction

from .linalg import determinant
from .poly import BiPoly, Poly


def sylvester_matrix(f: Poly, g: Poly, deg_g: int | None = None) -> list[list[Fraction]]:
    """Sylvester matrix of f and g, with g padded to the formal degree ``deg_g``."""
    p = f.degree
    q = g.degree if deg_g is None else deg_g
    if q < g.degree:
        raise ValueError("formal degree below actual degree")
    size = p + q
    fc = [f[i] for i in range(p, -1, -1)]
    gc = [g[i] for i in range(q, -1, -1)]
    rows = []
    for i in range(q):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - p - 1 - i))
    for i in range(p):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - q - 1 - i))
    return rows


def resultant(f: Poly, g: Poly, deg_g: int | None = None) -> Fraction:
    """Res(f, g) = lc(f)^q * prod g(x) over the roots x of f, with q the formal degree of g."""
    if not f or (not g and (deg_g is None or deg_g < 0)):
        return Fraction(0)
    if f.degree == 0:
        q = g.degree if deg_g is None else deg_g
        return f.lc ** q
    if deg_g is None and g.degree == 0:
        return g.lc ** f.degree
    return determinant(sylvester_matrix(f, g, deg_g))


def interpolate(xs: list[Fraction], ys: list[Fraction]) -> Poly:
    """Newton interpolation through distinct nodes."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = Poly([coef[-1]])
    for i in range(n - 2, -1, -1):
        p = p * Poly([-xs[i], 1]) + Poly([coef[i]])
    return p


def resultant_eliminate(I: BiPoly, m: Poly) -> Poly:
    """Eliminate lam from I(lam, alpha) against m(lam).

    Returns Res_lam(m, I) as a polynomial in alpha, normalized to integer
    coefficients with content 1 and positive leading coefficient.
    """
    if not m:
        raise ValueError("m must be nonzero")
    if m.degree < 1:
        raise ValueError("m is constant: there is no lam to eliminate")
    if I.is_zero():
        raise ValueError("I must be nonzero")
    q = I.deg_lambda
    bound = m.degree * max(I.deg_alpha, 0)
    xs = [Fraction(k) for k in range(bound + 1)]
    ys = [resultant(m, I.at_alpha(x), q) for x in xs]
    R = interpolate(xs, ys)
    if not R:
        return R
    return R.primitive()
