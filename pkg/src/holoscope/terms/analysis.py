"""Static analysis and exact evaluation of terms."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .model import BalancedTerm, BinomialForm, LinearForm, SupportSlice


class UnbalancedTermError(ValueError):
    def __init__(self, residual: LinearForm):
        super().__init__(f"term is not balanced: residual {residual}")
        self.residual = residual


class InfiniteSupportError(ValueError):
    def __init__(self, direction: tuple[int, ...]):
        super().__init__(f"support is unbounded along direction {direction}")
        self.direction = direction


class OutsideSupportError(ValueError):
    pass


# balance ----------------------------------------------------------------------

def check_balance(t: BalancedTerm) -> tuple[bool, LinearForm]:
    residual = LinearForm.zero(t.r)
    for form, sign in t.factors:
        residual = residual + form.scale(sign)
    return residual.is_zero(), residual


# Fourier-Motzkin ----------------------------------------------------------------
# A constraint (a, c) stands for  a . x + c >= 0  with rational a, c.

Constraint = tuple[tuple[Fraction, ...], Fraction]


def _normalize(con: Constraint) -> Constraint:
    a, c = con
    scale = max((abs(x) for x in (*a, c)), default=Fraction(0))
    if scale == 0:
        return con
    return tuple(x / scale for x in a), c / scale


def fm_eliminate(cons: Sequence[Constraint], var: int) -> list[Constraint]:
    """Project out variable ``var`` (its coefficient becomes zero everywhere)."""
    pos, neg, rest = [], [], []
    for a, c in cons:
        (pos if a[var] > 0 else neg if a[var] < 0 else rest).append((a, c))
    out = set(_normalize(x) for x in rest)
    for (ap, cp), (an, cn) in itertools.product(pos, neg):
        wp, wn = -an[var], ap[var]
        a = tuple(wp * x + wn * y for x, y in zip(ap, an))
        c = wp * cp + wn * cn
        out.add(_normalize((a, c)))
    return sorted(out)


def fm_feasible_point(cons: Sequence[Constraint], nvars: int) -> tuple[Fraction, ...] | None:
    """A rational solution of the system, or None if it is infeasible."""
    systems = [list(cons)]
    for v in range(nvars - 1, 0, -1):
        systems.append(fm_eliminate(systems[-1], v))
    # systems[-1] only involves x_0 (plus constants)
    x = [Fraction(0)] * nvars
    for depth, v in enumerate(range(nvars)):
        system = systems[nvars - 1 - depth] if nvars else systems[0]
        lo, hi = None, None
        for a, c in system:
            rest = c + sum(a[j] * x[j] for j in range(v))
            if a[v] > 0:
                b = -rest / a[v]
                lo = b if lo is None else max(lo, b)
            elif a[v] < 0:
                b = rest / -a[v]
                hi = b if hi is None else min(hi, b)
            elif any(a[j] for j in range(v + 1, nvars)):
                continue
            elif rest < 0:
                return None
        if lo is not None and hi is not None and lo > hi:
            return None
        x[v] = lo if lo is not None else (hi if hi is not None else Fraction(0))
    if nvars == 0:
        return () if all(c >= 0 for _, c in cons) else None
    if all(sum(ai * xi for ai, xi in zip(a, x)) + c >= 0 for a, c in cons):
        return tuple(x)
    return None


def _k_constraints(t: BalancedTerm, n: int | None) -> list[Constraint]:
    cons = []
    for form, _ in t.factors:
        c = Fraction(0) if n is None else Fraction(form.coeff_n * n + form.constant)
        cons.append((tuple(Fraction(x) for x in form.coeff_k), c))
    return cons


def recession_witness(t: BalancedTerm) -> tuple[int, ...] | None:
    """A nonzero integer direction d with every k-part >= 0 at d, or None if the cone is {0}."""
    r = t.r
    cone = [(a, Fraction(0)) for a, _ in _k_constraints(t, None) if any(a)]
    for i in range(r):
        for s in (1, -1):
            unit = tuple(Fraction(s if j == i else 0) for j in range(r))
            pt = fm_feasible_point(cone + [(unit, Fraction(-1))], r)
            if pt is not None:
                den = math.lcm(*(x.denominator for x in pt))
                ints = [int(x * den) for x in pt]
                g = math.gcd(*ints)
                return tuple(x // g for x in ints)
    return None


def check_finiteness(t: BalancedTerm) -> bool:
    """True iff the recession cone of the support is {0}."""
    return recession_witness(t) is None


def support_box(t: BalancedTerm, n: int) -> list[tuple[int, int]] | None:
    """Integer bounding box of the slice at n (None if the slice is empty)."""
    r = t.r
    cons = _k_constraints(t, n)
    box = []
    for i in range(r):
        system = cons
        for v in range(r):
            if v != i:
                system = fm_eliminate(system, v)
        lo, hi = None, None
        for a, c in system:
            if a[i] > 0:
                b = math.ceil(-c / a[i])
                lo = b if lo is None else max(lo, b)
            elif a[i] < 0:
                b = math.floor(c / -a[i])
                hi = b if hi is None else min(hi, b)
            elif c < 0:
                return None
        if lo is None or hi is None:
            raise InfiniteSupportError(recession_witness(t) or (0,) * r)
        if lo > hi:
            return None
        box.append((lo, hi))
    if r == 0 and any(c < 0 for _, c in cons):
        return None
    return box


def enumerate_support(t: BalancedTerm, n: int) -> SupportSlice:
    """All k in Z^r with A_j(n, k) >= 0 for every factor, in lexicographic order."""
    witness = recession_witness(t)
    if witness is not None:
        raise InfiniteSupportError(witness)
    box = support_box(t, n)
    if box is None:
        return SupportSlice(n, ())
    forms = list(dict.fromkeys(f for f, _ in t.factors))
    points = tuple(
        k for k in itertools.product(*(range(lo, hi + 1) for lo, hi in box))
        if all(f(n, k) >= 0 for f in forms)
    )
    return SupportSlice(n, points)


# evaluation -------------------------------------------------------------------

@lru_cache(maxsize=None)
def factorial(m: int) -> int:
    return math.factorial(m)


def _constant_part(C0: Fraction, C: Sequence[Fraction], n: int, k: Sequence[int]) -> Fraction:
    val = C0**n if C0 != 1 else Fraction(1)
    for c, ki in zip(C, k):
        if c != 1:
            val *= c**ki
    return val


def eval_term(t: BalancedTerm, n: int, k: Sequence[int]) -> Fraction:
    """Exact value C0^n * prod C_i^{k_i} * prod A_j(n, k)!^{eps_j}."""
    for form in dict.fromkeys(f for f, _ in t.factors):
        if form(n, k) < 0:
            raise OutsideSupportError(f"({form.to_str(t.var_names)})! at n={n}, k={tuple(k)} is negative")
    num, den = 1, 1
    for form, e in t.grouped():
        f = factorial(form(n, k))
        if e > 0:
            num *= f**e
        else:
            den *= f ** (-e)
    return _constant_part(t.C0, t.C, n, k) * Fraction(num, den)


def to_binomial_form(t: BalancedTerm) -> BinomialForm:
    """Rewrite a balanced term as a ratio of products of binomials.

    With A the sum of the numerator forms (equal to the sum of the
    denominator forms by balance), the factorial ratio equals
    multinomial(A; denominator forms) / multinomial(A; numerator forms), and
    each multinomial telescopes into binom(A - a_1 - ... - a_{i-1}, a_i).
    Factors binom(X, X) = 1 are dropped.
    """
    balanced, residual = check_balance(t)
    if not balanced:
        raise UnbalancedTermError(residual)
    plus = [f for f, s in t.factors if s > 0]
    minus = [f for f, s in t.factors if s < 0]
    total = LinearForm.zero(t.r)
    for f in plus:
        total = total + f
    binomials = []
    for parts, sign in ((minus, 1), (plus, -1)):
        remaining = total
        for a in parts:
            if remaining != a:
                binomials.append((remaining, a, sign))
            remaining = remaining - a
    return BinomialForm(t.C0, t.C, tuple(binomials))


def eval_binomial_form(b: BinomialForm, n: int, k: Sequence[int]) -> Fraction:
    num, den = 1, 1
    for top, bottom, sign in b.binomials:
        tv, bv = top(n, k), bottom(n, k)
        if bv < 0 or tv < bv:
            raise OutsideSupportError(f"binom({tv}, {bv}) outside its range")
        c = math.comb(tv, bv)
        if sign > 0:
            num *= c
        else:
            den *= c
    return _constant_part(b.C0, b.C, n, k) * Fraction(num, den)
