"""Generating-function ODEs, their singular points and local exponents.

The exponents at a regular singular factor f of the leading coefficient are
computed for all roots of f at once: the indicial form I(lam, alpha) has
coefficients that are polynomials in a formal root lam of f, and
R(alpha) = Res_lam(f, I) is a polynomial over Q. Rationality of exponents
then reduces to the rational root theorem.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence

import mpmath

from .exact import (
    DEFAULT_RADIUS,
    BiPoly,
    IsolatedRoot,
    Poly,
    factor_rational,
    isolate_roots,
    multiplicity,
    rational_roots,
    resultant_eliminate,
    squarefree_decomposition,
)
from .guess import Recurrence
from .multisum import ExactSequence

class IrregularSingularityError(ValueError):
    pass


class ODEFormatError(ValueError):
    pass


@dataclass(frozen=True)
class LinearODE:
    """sum_i coeffs[i](z) G^(i)(z) + inhom(z) = 0."""

    coeffs: tuple[Poly, ...]
    inhom: Poly = field(default_factory=Poly)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("an ODE needs order >= 1")
        if not self.coeffs[-1]:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Poly:
        return self.coeffs[-1]

    def normalized(self) -> "LinearODE":
        """Integer coefficients with joint content 1, leading coefficient of p_m positive."""
        polys = [*self.coeffs, self.inhom]
        den = reduce(math.lcm, (c.denominator for p in polys for c in p.coeffs), 1)
        g = reduce(math.gcd, (int(c * den) for p in polys for c in p.coeffs), 0)
        scale = Fraction(den, g if self.leading.lc > 0 else -g)
        return LinearODE(tuple(p * scale for p in self.coeffs), self.inhom * scale)

    def series_residual(self, values: Sequence, upto: int) -> list[Fraction]:
        """Coefficients of z^0..z^upto in L(G_N) + inhom, G_N the truncated series of ``values``."""
        G = Poly(values)
        acc = self.inhom
        deriv = G
        for i, p in enumerate(self.coeffs):
            if i:
                deriv = deriv.derivative()
            acc = acc + p * deriv
        return [acc[k] for k in range(upto + 1)]

    def to_str(self, var: str = "z") -> str:
        parts = []
        for i, p in enumerate(self.coeffs):
            if p:
                d = "G" + ("'" * i if i <= 3 else f"^({i})")
                parts.append(f"({p.to_str(var)})*{d}")
        if self.inhom:
            parts.append(f"({self.inhom.to_str(var)})")
        return " + ".join(parts) + " = 0"

    def __str__(self) -> str:
        return self.to_str()


# transfer -----------------------------------------------------------------------

@lru_cache(maxsize=None)
def stirling2(k: int, i: int) -> int:
    if k == i:
        return 1
    if i == 0 or i > k:
        return 0
    return i * stirling2(k - 1, i) + stirling2(k - 1, i - 1)


def rec_to_ode(r: Recurrence, initial: Sequence) -> LinearODE:
    """ODE for G(z) = sum a_n z^n from a recurrence valid for n >= 0.

    Multiplying the relation at n by z^(n+d) and summing gives
    sum_j z^(d-j) P_j(theta - j) G = boundary terms, theta = z d/dz.
    theta^k is expanded with Stirling numbers of the second kind.
    """
    d = r.order
    if len(initial) != d:
        raise ValueError(f"need {d} initial values, got {len(initial)}")
    a = [Fraction(v) for v in initial]
    m = max(p.degree for p in r.coeffs if p)
    coeffs = [Poly() for _ in range(max(m, 0) + 1)]
    inhom = Poly()
    for j, P in enumerate(r.coeffs):
        if not P:
            continue
        c = P.shift(-j)  # P_j(x - j)
        for k, ck in enumerate(c.coeffs):
            for i in range(k + 1):
                s = stirling2(k, i)
                if s:
                    coeffs[i] = coeffs[i] + Poly.monomial(d - j + i, ck * s)
        for mm in range(j):
            inhom = inhom - Poly.monomial(mm + d - j, P(mm - j) * a[mm])
    v = min((p.valuation() for p in (*coeffs, inhom) if p), default=0)
    if v:
        coeffs = [_shift_down(p, v) for p in coeffs]
        inhom = _shift_down(inhom, v)
    if m == 0:
        # algebraic relation p_0 G + inhom = 0: differentiate once
        p0 = coeffs[0]
        coeffs = [p0.derivative(), p0]
        inhom = inhom.derivative()
    return LinearODE(tuple(coeffs), inhom).normalized()


def _shift_down(p: Poly, v: int) -> Poly:
    return Poly(p.coeffs[v:]) if p else p


# singular points -------------------------------------------------------------------

@dataclass(frozen=True)
class FactorReport:
    factor: Poly
    multiplicity: int
    roots: tuple[IsolatedRoot, ...]
    regular: bool
    exponent_poly: Poly | None = None
    rational_exponents: tuple[Fraction, ...] = ()
    has_irrational_exponent: bool = False
    log_bound: int = 0

    @property
    def is_origin(self) -> bool:
        return self.factor.degree == 1 and self.factor[0] == 0

    @property
    def all_rational(self) -> bool:
        return self.regular and not self.has_irrational_exponent

    @property
    def no_rational(self) -> bool:
        return self.regular and not self.rational_exponents


@dataclass(frozen=True)
class SingularityReport:
    factors: tuple[FactorReport, ...]
    origin_note: bool

    @property
    def finite_nonzero(self) -> tuple[FactorReport, ...]:
        return tuple(f for f in self.factors if not f.is_origin)


def order_at(p: Poly, f: Poly) -> float:
    """Multiplicity of f in p (infinite for p = 0)."""
    return math.inf if not p else multiplicity(p, f)


def is_regular(o: LinearODE, f: Poly) -> bool:
    """Fuchs criterion at the roots of f: ord_f(p_i) >= ord_f(p_m) - (m - i)."""
    m = o.order
    mu = multiplicity(o.leading, f)
    return all(order_at(p, f) >= mu - (m - i) for i, p in enumerate(o.coeffs))


def _taylor_coeff(p: Poly, k: int) -> Poly:
    """p^(k)(lam) / k! as a polynomial in lam."""
    if k < 0:
        return Poly()
    return p.derivative(k) * Fraction(1, math.factorial(k))


def falling(i: int) -> Poly:
    """alpha (alpha - 1) ... (alpha - i + 1)."""
    out = Poly.constant(1)
    for t in range(i):
        out = out * Poly([-t, 1])
    return out


def indicial_form(o: LinearODE, f: Poly) -> BiPoly:
    """I(lam, alpha): lowest w-coefficient of L(w^alpha), w = z - lam, reduced mod f(lam)."""
    if not is_regular(o, f):
        raise IrregularSingularityError(f"{f.to_str()} is an irregular singular factor")
    m = o.order
    mu = multiplicity(o.leading, f)
    terms = [(_taylor_coeff(p, mu - m + i) % f, falling(i)) for i, p in enumerate(o.coeffs)]
    return BiPoly.from_terms(terms).reduce_lambda(f)


def exponents_at(o: LinearODE, f: Poly) -> Poly:
    """R(alpha) over Q whose roots are the local exponents at every root of f."""
    return resultant_eliminate(indicial_form(o, f), f)


def rationality_verdict(R: Poly) -> tuple[bool, list[Fraction]]:
    if not R:
        raise ValueError("exponent polynomial must be nonzero")
    roots = rational_roots(R)
    return len(roots) == R.degree, sorted(set(roots))


def singular_points(o: LinearODE, radius: Fraction = DEFAULT_RADIUS) -> SingularityReport:
    """Factor p_m over Q, isolate roots to ``radius``, test regularity and attach exact exponents."""
    reports = []
    for f, mult in factor_rational(o.leading):
        roots = tuple(isolate_roots(f, radius))
        regular = is_regular(o, f)
        if not regular:
            reports.append(FactorReport(f, mult, roots, False))
            continue
        R = exponents_at(o, f)
        all_rat, rats = rationality_verdict(R)
        beta = log_bound(indicial_form(o, f), f)
        if beta is None:
            beta = max(m for _, m in squarefree_decomposition(R)) - 1
        reports.append(FactorReport(f, mult, roots, True, R, tuple(rats), not all_rat, beta))
    origin = any(r.is_origin for r in reports)
    return SingularityReport(tuple(reports), origin)


def numeric_exponents(o: LinearODE, f: Poly, root: IsolatedRoot, dps: int = 60, ctx=None) -> list:
    """Exponents at one isolated root from the indicial polynomial evaluated numerically.

    Roots come from companion-matrix eigenvalues at triple working precision:
    a k-fold exponent is only resolved to about eps^(1/k), and Durand-Kerner
    iteration stalls on such clusters.
    """
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = dps
    work = mpmath.MPContext()
    work.dps = 3 * ctx.dps
    lam = root.box.mpc(work)
    m = o.order
    mu = multiplicity(o.leading, f)
    coeffs = [work.mpc(0)] * (m + 1)
    for i, p in enumerate(o.coeffs):
        c = _taylor_coeff(p, mu - m + i).evalf(lam, work)
        for j, fc in enumerate(falling(i).coeffs):
            coeffs[j] += c * fc.numerator / fc.denominator
    scale = max(abs(c) for c in coeffs)
    while len(coeffs) > 1 and abs(coeffs[-1]) <= scale * work.mpf(10) ** (-ctx.dps):
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [ctx.mpc(-coeffs[0] / coeffs[1])]
    companion = work.matrix(deg, deg)
    for i in range(1, deg):
        companion[i, i - 1] = 1
    for i in range(deg):
        companion[i, deg - 1] = -coeffs[i] / coeffs[-1]
    eigs = work.eig(companion, left=False, right=False)
    return sorted((ctx.mpc(e) for e in eigs), key=lambda z: (z.real, z.imag))


# arithmetic in K[alpha], K = Q[lam]/(f); polynomials are lists of Poly in lam, lowest first

class _ZeroDivisor(ArithmeticError):
    pass


def _k_inverse(a: Poly, f: Poly) -> Poly:
    r0, r1, s0, s1 = f, a % f, Poly(), Poly.constant(1)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1, s0, s1 = r1, r, s1, s0 - q * s1
    if r0.degree != 0:
        raise _ZeroDivisor(f"{f.to_str()} is reducible")
    return (s0 * (1 / r0.lc)) % f


def _k_trim(a: list[Poly], f: Poly) -> list[Poly]:
    a = [c % f for c in a]
    while a and not a[-1]:
        a.pop()
    return a


def _k_rem(a: list[Poly], b: list[Poly], f: Poly) -> list[Poly]:
    a = list(a)
    inv = _k_inverse(b[-1], f)
    while len(a) >= len(b):
        q = (a[-1] * inv) % f
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - q * c
        a = _k_trim(a, f)
    return a


def _k_gcd(a: list[Poly], b: list[Poly], f: Poly) -> list[Poly]:
    while b:
        a, b = b, _k_rem(a, b, f)
    return a


def log_bound(I: BiPoly, f: Poly) -> int | None:
    """Largest multiplicity of an exponent at one root of f, minus one (None if f is reducible)."""
    g = _k_trim([I.alpha_coeff(j) for j in range(I.deg_alpha + 1)], f)
    steps = 0
    try:
        while len(g) > 1:
            dg = _k_trim([c * j for j, c in enumerate(g)][1:], f)
            g = _k_gcd(g, dg, f)
            if len(g) > 1:
                steps += 1
    except _ZeroDivisor:
        return None
    return steps


def exponent_match_error(o: LinearODE, fr: FactorReport) -> float:
    """Largest distance from a numeric exponent to the nearest exact exponent root."""
    ctx = mpmath.MPContext()
    ctx.dps = 60
    exact = [r.box.mpc(ctx) for r in isolate_roots(fr.exponent_poly)]
    worst = 0.0
    for root in fr.roots:
        for alpha in numeric_exponents(o, fr.factor, root, ctx=ctx):
            worst = max(worst, float(min(abs(alpha - e) for e in exact)))
    return worst


# verdicts ----------------------------------------------------------------------------

class VerdictKind(str, enum.Enum):
    OBSTRUCTION = "ObstructionIrrationalExponent"
    CONSISTENT = "ConsistentRationalExponents"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    trace: tuple[dict, ...]


def _non_termination(s: ExactSequence, rec: Recurrence | None) -> tuple[bool, dict]:
    """Whether G can be ruled out as a polynomial.

    If a_n vanished for all large n, the recurrence run backward would force
    a_n = 0 for every n above the largest nonnegative integer root of P_0.
    """
    tail = s.values[-(rec.order if rec else 1):]
    if all(v == 0 for v in tail):
        return False, {"step": "non-termination", "holds": False,
                       "detail": "prefix ends in zeros; the series may be a polynomial"}
    if rec is None:
        return False, {"step": "non-termination", "holds": False,
                       "detail": "no recurrence supplied; backward propagation not checked"}
    roots = [int(x) for x in rational_roots(rec.coeffs[0]) if x.denominator == 1 and x >= 0]
    barrier = max(roots, default=-1)
    witness = next((n for n, v in s.items() if v != 0 and n > barrier), None)
    ok = witness is not None
    return ok, {"step": "non-termination", "holds": ok, "barrier": barrier, "witness_index": witness,
                "detail": "a nonzero value above every integer root of P_0 cannot be reached from a zero tail"
                if ok else "every nonzero value lies at or below an integer root of P_0"}


def obstruction_verdict(o: LinearODE, s: ExactSequence, report: SingularityReport,
                        rec: Recurrence | None = None) -> Verdict:
    """Classify the exponent data.

    Obstruction needs: (i) every finite nonzero factor of p_m carries no
    rational exponent, (ii) all of them are regular, (iii) the series is
    provably not a polynomial (via ``rec``). Consistent means every factor
    is regular with only rational exponents; anything else is inconclusive.
    """
    trace = []
    for fr in report.factors:
        trace.append({
            "step": "factor", "factor": fr.factor.to_str(), "multiplicity": fr.multiplicity,
            "regular": fr.regular,
            "exponent_poly": fr.exponent_poly.to_str("alpha") if fr.exponent_poly else None,
            "rational_exponents": [str(x) for x in fr.rational_exponents],
            "has_irrational_exponent": fr.has_irrational_exponent,
        })
    nonzero = report.finite_nonzero
    cond_i = bool(nonzero) and all(fr.regular and not fr.rational_exponents for fr in nonzero)
    cond_ii = all(fr.regular for fr in nonzero)
    cond_iii, iii_trace = _non_termination(s, rec)
    trace.append({"step": "no-rational-exponent", "holds": cond_i})
    trace.append({"step": "regularity", "holds": cond_ii})
    trace.append(iii_trace)
    if cond_i and cond_ii and cond_iii:
        return Verdict(VerdictKind.OBSTRUCTION, tuple(trace))
    if all(fr.all_rational for fr in report.factors):
        trace.append({"step": "conclusion", "detail": "all exponents rational and all singularities regular"})
        return Verdict(VerdictKind.CONSISTENT, tuple(trace))
    reasons = []
    if not cond_ii or not all(fr.regular for fr in report.factors):
        reasons.append("irregular singular factor present")
    if any(fr.rational_exponents for fr in nonzero) and any(fr.has_irrational_exponent for fr in report.factors):
        reasons.append("rational and irrational exponents coexist; the dominant term may carry a rational exponent")
    if any(fr.has_irrational_exponent for fr in report.factors) and not cond_iii:
        reasons.append("non-termination of the series not established")
    if not reasons:
        reasons.append("irrational exponents occur only at the origin")
    trace.append({"step": "conclusion", "detail": "; ".join(reasons)})
    return Verdict(VerdictKind.INCONCLUSIVE, tuple(trace))


# text format -------------------------------------------------------------------------

def format_ode(o: LinearODE) -> str:
    def row(p: Poly) -> str:
        return " ".join(str(c) for c in p.coeffs) if p else "0"

    lines = [f"order {o.order}"]
    lines += [f"p_{i}: {row(p)}" for i, p in enumerate(o.coeffs)]
    lines.append(f"inhom: {row(o.inhom)}")
    return "\n".join(lines) + "\n"


def parse_ode(text: str) -> LinearODE:
    order = None
    coeffs: dict[int, Poly] = {}
    inhom = Poly()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if order is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "order" or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ODEFormatError(f"line {lineno}: expected 'order m' with m >= 1")
            order = int(parts[1])
            continue
        head, sep, body = line.partition(":")
        head = head.strip()
        try:
            cs = Poly([Fraction(c) for c in body.split()])
        except (ValueError, ZeroDivisionError):
            raise ODEFormatError(f"line {lineno}: bad coefficients") from None
        if sep and head == "inhom":
            inhom = cs
        elif sep and head.startswith("p_") and head[2:].isdigit() and int(head[2:]) <= order:
            coeffs[int(head[2:])] = cs
        else:
            raise ODEFormatError(f"line {lineno}: expected 'p_i: ...' or 'inhom: ...'")
    if order is None:
        raise ODEFormatError("missing 'order m' line")
    try:
        return LinearODE(tuple(coeffs.get(i, Poly()) for i in range(order + 1)), inhom)
    except ValueError as exc:
        raise ODEFormatError(str(exc)) from None
