from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from holoscope.exact import (
    BiPoly,
    ComplexBox,
    Poly,
    determinant,
    factor_rational,
    isolate_roots,
    nullspace,
    poly_gcd,
    rational_roots,
    resultant,
    resultant_eliminate,
    squarefree_decomposition,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
small_ints = st.integers(min_value=-9, max_value=9)
polys = st.lists(rationals, min_size=0, max_size=6).map(Poly)
int_polys = st.lists(small_ints, min_size=2, max_size=6).map(Poly).filter(lambda p: p.degree >= 1)

LAM = sympy.Symbol("lam")
ALPHA = sympy.Symbol("alpha")


def to_sympy(p: Poly, x):
    return sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p.coeffs))


def sympy_roots(p: Poly) -> list[tuple[complex, int]]:
    """Numeric roots with multiplicity, via sympy's squarefree split."""
    x = sympy.Symbol("x")
    _, parts = sympy.Poly(to_sympy(p, x), x).sqf_list()
    return [(complex(z), m) for f, m in parts for z in f.nroots(n=30)]


# ring axioms -----------------------------------------------------------------------

@given(polys, polys, polys)
def test_poly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(rationals, rationals, rationals)
def test_rationals_stay_reduced(a, b, c):
    for x in (a + b, a * b - c, (a - c) * (b + c)):
        assert x.denominator >= 1
        assert sympy.gcd(abs(x.numerator), x.denominator) == 1


@given(polys, polys.filter(bool))
def test_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert not r or r.degree < b.degree


def test_zero_poly_is_empty():
    assert Poly([0, 0]).coeffs == ()
    assert Poly().degree == -1 or Poly().degree < 0


@given(polys.filter(bool), polys.filter(bool))
def test_gcd_divides_both(a, b):
    g = poly_gcd(a, b)
    assert not (a % g) and not (b % g)


@given(int_polys)
def test_squarefree_decomposition_reassembles(p):
    prod = Poly.constant(1)
    for f, m in squarefree_decomposition(p * p):
        prod = prod * f**m
    assert (p * p).primitive() == prod.primitive()


# linear algebra ---------------------------------------------------------------------

def test_nullspace_examples():
    assert nullspace([[1, -2]]) == [(2, 1)]
    assert nullspace([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []
    basis = nullspace([[1, 1, 1], [2, 2, 2]])
    assert len(basis) == 2
    for v in basis:
        assert sum(v) == 0


@given(st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_vectors_annihilate(M):
    basis = nullspace(M)
    for v in basis:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in M)
    rank = sympy.Matrix(M).rank()
    assert len(basis) == 4 - rank


@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_sympy(M):
    assert determinant(M) == sympy.Matrix(M).det()


# resultants -------------------------------------------------------------------------

def test_resultant_eliminate_examples():
    I1 = BiPoly.from_terms([(Poly.constant(1), Poly.x()), (Poly([0, -1]), Poly.constant(1))])
    assert resultant_eliminate(I1, Poly([-3, 1])) == Poly([-3, 1])
    f = Poly([2, -7, 2])
    I2 = BiPoly.from_terms([(Poly([2, -14, 6]), Poly.x()), (Poly([-3, -4, 1]), Poly.constant(1))])
    assert resultant_eliminate(I2, f) == Poly([-31, 88, 44])
    I3 = BiPoly.from_terms([(Poly.constant(1), Poly.x()), (Poly([0, 0, -1]), Poly.constant(1))])
    assert resultant_eliminate(I3, Poly([1, 0, 1])) == Poly([1, 2, 1])


def test_resultant_eliminate_oracle_sympy():
    f = Poly([2, -7, 2])
    I = BiPoly.from_terms([(Poly([2, -14, 6]), Poly.x()), (Poly([-3, -4, 1]), Poly.constant(1))])
    expr = (6 * LAM**2 - 14 * LAM + 2) * ALPHA + (LAM**2 - 4 * LAM - 3)
    oracle = sympy.Poly(sympy.resultant(to_sympy(f, LAM), expr, LAM), ALPHA)
    mine = sympy.Poly(to_sympy(resultant_eliminate(I, f), ALPHA), ALPHA)
    assert sympy.simplify(oracle.as_expr() / mine.as_expr()).is_Rational


def test_resultant_eliminate_rejects_constant():
    with pytest.raises(ValueError):
        resultant_eliminate(BiPoly([[1, 1]]), Poly.constant(3))


@given(int_polys, st.lists(st.lists(small_ints, min_size=1, max_size=3), min_size=1, max_size=3))
def test_resultant_vanishes_on_common_roots(m, rows):
    I = BiPoly(rows)
    assume(not I.is_zero() and I.deg_alpha >= 1)
    R = resultant_eliminate(I, m)
    if not R:
        return
    for a in set(rational_roots(R)):
        # an exact common root in lam must exist: gcd(m, I(., a)) nontrivial
        assert poly_gcd(m, I.at_alpha(a)).degree >= 1


def _sylvester_det(f: Poly, g: Poly):
    # built from scratch; sympy.resultant itself drops the sign for Res(x+1, x^3)
    p, q = f.degree, g.degree
    fc = [sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)]
    gc = [sympy.Rational(c.numerator, c.denominator) for c in reversed(g.coeffs)]
    rows = [[0] * i + fc + [0] * (q - 1 - i) for i in range(q)]
    rows += [[0] * i + gc + [0] * (p - 1 - i) for i in range(p)]
    return sympy.Matrix(rows).det()


@given(int_polys.filter(lambda p: p.degree <= 3),
       st.lists(st.lists(small_ints, min_size=1, max_size=3), min_size=2, max_size=3))
def test_resultant_vanishes_at_shared_roots_numeric(m, rows):
    I = BiPoly(rows)
    assume(I.deg_alpha >= 1)
    R = resultant_eliminate(I, m)
    ctx = mpmath.MPContext()
    ctx.dps = 50
    for lam in isolate_roots(m):
        z = lam.box.mpc(ctx)
        coeffs = [I.alpha_coeff(j).evalf(z, ctx) for j in range(I.deg_alpha + 1)]
        while coeffs and abs(coeffs[-1]) < ctx.mpf(10) ** -30:
            coeffs.pop()
        if len(coeffs) < 2:
            continue
        for a in ctx.polyroots(coeffs[::-1], maxsteps=200, extraprec=200):
            scale = sum(abs(c) * max(1, abs(a)) ** i for i, c in enumerate(R.coeffs))
            assert abs(R.evalf(a, ctx)) <= scale * ctx.mpf(10) ** -15


@given(int_polys, int_polys)
def test_univariate_resultant_matches_sylvester_oracle(f, g):
    assert resultant(f, g) == _sylvester_det(f, g)


@given(int_polys, int_polys)
def test_resultant_product_formula(f, g):
    value = complex(float(f.lc) ** g.degree)
    for z, m in sympy_roots(f):
        value *= complex(g.evalf(z)) ** m
    r = resultant(f, g)
    assert abs(value - float(r)) <= 1e-6 * max(1.0, abs(float(r)))


# roots ------------------------------------------------------------------------------

def test_rational_roots_examples():
    assert rational_roots(Poly([-3, 5, 2])) == [Fraction(-3), Fraction(1, 2)]
    assert rational_roots(Poly([-31, 88, 44])) == []
    assert rational_roots(Poly([-2, 1])) == [Fraction(2)]


@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=4), min_size=1, max_size=4))
def test_rational_roots_complete(roots):
    p = Poly.from_roots(roots) * Poly([1, 0, 1])  # x^2+1 adds no rational roots
    assert rational_roots(p) == sorted(roots)


def test_isolate_roots_examples():
    r = isolate_roots(Poly([-1, 0, 1]))
    assert [x.box.contains_point(v) for x, v in zip(r, (-1, 1))] == [True, True]
    r = isolate_roots(Poly([2, -7, 2]))
    ctx = mpmath.MPContext()
    ctx.dps = 50
    s33 = ctx.sqrt(33)
    expected = [(7 - s33) / 4, (7 + s33) / 4]
    for root, e in zip(r, expected):
        assert abs(root.box.mpc(ctx) - e) <= ctx.mpf(root.box.radius.numerator) / root.box.radius.denominator
        assert root.box.radius <= Fraction(1, 10**30)
    (one,) = isolate_roots(Poly([1, -2, 1]))
    assert one.multiplicity == 2 and one.box.contains_point(1)


@given(int_polys)
def test_isolated_boxes_disjoint_and_contain_sympy_roots(p):
    boxes = isolate_roots(p)
    for a, b in zip(boxes, boxes[1:]):
        assert a.box.disjoint(b.box)
    oracle = sympy_roots(p)
    assert len(oracle) == len(boxes)
    for zc, mult in oracle:
        hits = [b for b in boxes if abs(complex(b.center) - zc) < 1e-8]
        assert len(hits) == 1 and hits[0].multiplicity == mult
    assert sum(b.multiplicity for b in boxes) == p.degree


@given(int_polys)
def test_refinement_keeps_one_cluster_per_box(p):
    coarse = isolate_roots(p, Fraction(1, 10**6))
    fine = isolate_roots(p, Fraction(1, 10**30))
    assert len(coarse) == len(fine)
    for c in coarse:
        inside = [f for f in fine if c.box.contains(f.box) or not c.box.disjoint(f.box)]
        assert len(inside) == 1


def test_complex_box_geometry():
    a = ComplexBox((Fraction(0), Fraction(0)), Fraction(1))
    b = ComplexBox((Fraction(3), Fraction(0)), Fraction(1))
    assert a.disjoint(b) and not a.contains(b)
    assert a.contains(ComplexBox((Fraction(1, 2), Fraction(0)), Fraction(1, 4)))


def test_factor_rational_examples():
    assert factor_rational(Poly([0, 2, -7, 2])) == [(Poly([0, 1]), 1), (Poly([2, -7, 2]), 1)]
    f = factor_rational(Poly([4, 0, 0, 0, 1]))  # x^4 + 4 = (x^2-2x+2)(x^2+2x+2)
    assert sorted(q.degree for q, _ in f) == [2, 2]
    assert factor_rational(Poly([1, 0, -10, 0, 1])) == [(Poly([1, 0, -10, 0, 1]), 1)]


@given(st.lists(int_polys, min_size=1, max_size=3))
def test_factor_rational_reassembles(parts):
    p = Poly.constant(1)
    for q in parts:
        p = p * q
    prod = Poly.constant(1)
    for f, m in factor_rational(p):
        prod = prod * f**m
    assert prod.primitive() == p.primitive()
