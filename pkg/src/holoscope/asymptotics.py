"""Numeric asymptotics a_n ~ C * growth^n * n^theta * (n!)^s from exact values.

Exact rationals are converted to extended-precision floats only here. Limits
are accelerated with Richardson extrapolation for sequences whose error
expands in powers of 1/n:

    A^(k)_n = sum_{j=0}^{k} (-1)^(k+j) (n+j)^k x_{n+j} / (j! (k-j)!)

which removes the first k error terms. The error gauge is the gap between
the last two extrapolants.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .multisum import ExactSequence

DEFAULT_PRECISION = 30
PRECISION_ENV = "HOLOSCOPE_PRECISION"


class FitError(ValueError):
    pass


class NoDominantRatioError(FitError):
    pass


def precision_digits() -> int:
    raw = os.environ.get(PRECISION_ENV, "")
    try:
        digits = int(raw) if raw.strip() else DEFAULT_PRECISION
    except ValueError:
        raise FitError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    return max(digits, 15)


def make_context(digits: int | None = None) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = digits or precision_digits()
    return ctx


def to_mpf(x, ctx):
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, int):
        return ctx.mpf(x)
    return ctx.mpf(x)


@dataclass(frozen=True)
class Estimate:
    value: float
    gauge: float
    digits: str
    extrapolants: tuple[float, ...] = ()
    n_max: int = 0

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class AsymptoticFit:
    growth: Estimate | None
    theta: Estimate | None
    s_class: Fraction | float
    s_raw: float
    s_gauge: float
    notes: tuple[str, ...] = field(default_factory=tuple)


# Richardson -------------------------------------------------------------------------

def richardson_table(x: Callable[[int], object], N: int, depth: int, ctx) -> list:
    """[A^(0)_N, A^(1)_{N-1}, ..., A^(depth)_{N-depth}], every entry using values up to index N."""
    out = []
    for k in range(depth + 1):
        n = N - k
        acc = ctx.mpf(0)
        for j in range(k + 1):
            w = ctx.mpf(n + j) ** k / (math.factorial(j) * math.factorial(k - j))
            acc += (-1) ** (k + j) * w * x(n + j)
        out.append(acc)
    return out


def _estimate(table: list, ctx, n_max: int) -> Estimate:
    value = table[-1]
    gauge = abs(table[-1] - table[-2]) if len(table) > 1 else ctx.inf
    return Estimate(float(value), float(gauge), ctx.nstr(value, ctx.dps, min_fixed=-ctx.inf, max_fixed=ctx.inf),
                    tuple(float(t) for t in table), n_max)


def _nonzero_tail(s: ExactSequence, depth: int) -> list[int]:
    need = 2**depth * 8
    if len(s) < need:
        raise FitError(f"need at least {need} values for depth {depth}, got {len(s)}")
    tail = [n for n in s.indices()[len(s) // 2:] if s[n] != 0]
    if not tail:
        raise FitError("the tail of the sequence is identically zero")
    if len(tail) < (len(s) - len(s) // 2):
        raise NoDominantRatioError("zeros inside the tail: no dominant ratio")
    return tail


def _ratio_fn(s: ExactSequence, ctx) -> Callable[[int], object]:
    cache = {}

    def r(n: int):
        # exact quotient first: one rounding, and scaling s leaves it unchanged
        if n not in cache:
            cache[n] = to_mpf(s[n + 1] / s[n], ctx)
        return cache[n]

    return r


def _check_signs(r, tail: list[int]):
    if len({r(n) > 0 for n in tail[:-1]}) > 1:
        raise NoDominantRatioError("ratio a_(n+1)/a_n changes sign in the tail: no dominant ratio")


def fit_growth(s: ExactSequence, depth: int = 4, ctx=None) -> Estimate:
    """Extrapolated limit of |a_(n+1)/a_n|."""
    ctx = ctx or make_context()
    tail = _nonzero_tail(s, depth)
    r = _ratio_fn(s, ctx)
    _check_signs(r, tail)
    N = s.last - 1
    table = richardson_table(lambda n: abs(r(n)), N, depth, ctx)
    est = _estimate(table, ctx, s.last)
    if not est.value > 0 or est.gauge > 0.1 * abs(est.value):
        raise NoDominantRatioError(f"ratio extrapolants do not settle: {est.extrapolants}")
    return est


def fit_exponent(s: ExactSequence, growth, depth: int = 4, ctx=None) -> Estimate:
    """Extrapolated limit of theta_n = n (a_(n+1) / (growth a_n) - 1)."""
    ctx = ctx or make_context()
    tail = _nonzero_tail(s, depth)
    r = _ratio_fn(s, ctx)
    _check_signs(r, tail)
    if isinstance(growth, Estimate):
        g, g_gauge = ctx.mpf(growth.digits), growth.gauge
    else:
        g, g_gauge = to_mpf(growth, ctx), 0.0
    N = s.last - 1
    table = richardson_table(lambda n: n * (abs(r(n)) / g - 1), N, depth, ctx)
    est = _estimate(table, ctx, s.last)
    # an error d in growth enters theta_n as n*d/g, which the table amplifies by about depth+1
    carried = (depth + 1) * N * g_gauge / float(g)
    return Estimate(est.value, est.gauge + carried, est.digits, est.extrapolants, est.n_max)


# Gevrey class --------------------------------------------------------------------

def _log_abs(x: Fraction, ctx):
    return ctx.log(abs(x.numerator)) - ctx.log(x.denominator)


def _gevrey_slope(points: Sequence[tuple[int, object]], ctx):
    """Least-squares coefficient of n log n in log|a_n| ~ s n log n + b n + c log n + d + e/n."""
    rows, rhs = [], []
    for n, y in points:
        ln = ctx.log(n)
        rows.append([n * ln, ctx.mpf(n), ln, ctx.mpf(1), ctx.mpf(1) / n])
        rhs.append(y)
    A = ctx.matrix(rows)
    b = ctx.matrix(rhs)
    sol, _ = ctx.qr_solve(A, b)
    return sol[0]


SNAP_DENOMINATOR = 4


def classify_gevrey(s: ExactSequence, ctx=None) -> tuple[Fraction | float, float, float]:
    """(s_class, raw slope, gauge); s_class is a Fraction when the snap is within the gauge."""
    ctx = ctx or make_context()
    pts = [(n, v) for n, v in s.items() if v != 0 and n >= 1]
    if len(pts) < 32:
        raise FitError(f"need at least 32 nonzero values, got {len(pts)}")
    logs = [(n, _log_abs(v, ctx)) for n, v in pts]
    tail = logs[len(logs) // 2:]
    full = _gevrey_slope(tail, ctx)
    half = _gevrey_slope(tail[len(tail) // 2:], ctx)
    raw = float(full)
    gauge = float(abs(full - half))
    snap = Fraction(raw).limit_denominator(SNAP_DENOMINATOR)
    tol = max(10 * gauge, 1e-6)
    if abs(raw - snap) <= tol:
        return snap, raw, gauge
    return raw, raw, gauge


def fit_sequence(s: ExactSequence, depth: int = 4, ctx=None) -> AsymptoticFit:
    """Gevrey class first; growth and theta only for Gevrey class 0."""
    ctx = ctx or make_context()
    s_class, raw, gauge = classify_gevrey(s, ctx)
    if s_class != 0:
        return AsymptoticFit(None, None, s_class, raw, gauge,
                             ("growth and theta are only fitted for Gevrey class 0",))
    growth = fit_growth(s, depth, ctx)
    theta = fit_exponent(s, growth, depth, ctx)
    return AsymptoticFit(growth, theta, s_class, raw, gauge)


def synthetic_power_sequence(lam, theta, n_max: int, digits: int = 80, n0: int = 1) -> ExactSequence:
    """Rationals within 10^-digits relative of lam^n n^theta, for n0 <= n <= n_max."""
    ctx = make_context(digits + 10)
    lam_m, th = to_mpf(Fraction(lam), ctx), to_mpf(Fraction(theta), ctx)
    vals = []
    for n in range(n0, n_max + 1):
        v = lam_m**n * ctx.mpf(n) ** th
        man, exp = ctx.frexp(v)
        scaled = int(ctx.nint(man * ctx.mpf(2) ** (digits * 4)))
        e = exp - digits * 4
        vals.append(Fraction(scaled * 2**e) if e >= 0 else Fraction(scaled, 2**-e))
    return ExactSequence(n0, tuple(vals), "external")


# cross-validation ------------------------------------------------------------------

@dataclass(frozen=True)
class CrossValidationConfig:
    gauge_factor: float = 10.0
    growth_floor: float = 1e-3
    theta_floor: float = 5e-2


@dataclass(frozen=True)
class CrossValidation:
    consistent: bool
    matched_root: str | None
    predicted_growth: float | None
    growth_error: float | None
    matched_exponent: str | None
    predicted_theta: float | None
    theta_error: float | None
    notes: tuple[str, ...] = ()


def cross_validate(fit: AsymptoticFit, report, config: CrossValidationConfig = CrossValidationConfig()) -> CrossValidation:
    """Match the fitted growth to the smallest nonzero singularity and theta to -alpha - 1 there."""
    from .exact import isolate_roots

    if fit.growth is None or fit.theta is None:
        return CrossValidation(False, None, None, None, None, None, None, ("no growth/theta fit to compare",))
    ctx = make_context()
    cands = []
    for fr in report.finite_nonzero:
        for root in fr.roots:
            cands.append((abs(root.box.mpc(ctx)), root, fr))
    if not cands:
        return CrossValidation(False, None, None, None, None, None, None, ("no finite nonzero singularity",))
    cands.sort(key=lambda c: c[0])
    modulus, root, fr = cands[0]
    notes = []
    ties = [c for c in cands[1:] if abs(c[0] - modulus) < ctx.mpf(10) ** (-20)]
    if ties:
        notes.append("several singularities share the smallest modulus")
    pred_growth = 1 / modulus
    g_err = abs(ctx.mpf(fit.growth.digits) - pred_growth)
    g_tol = config.gauge_factor * fit.growth.gauge + config.growth_floor
    z = root.box.mpc(ctx)
    root_str = ctx.nstr(z.real, 20) if root.is_real() else ctx.nstr(z, 20)
    if not fr.regular or fr.exponent_poly is None:
        notes.append("dominant singularity is irregular; exponent not compared")
        return CrossValidation(False, root_str, float(pred_growth), float(g_err), None, None, None, tuple(notes))
    best = None
    for a in isolate_roots(fr.exponent_poly):
        alpha = a.box.mpc(ctx)
        if abs(alpha.imag) > ctx.mpf(10) ** (-20):
            continue
        th = -alpha.real - 1
        err = abs(ctx.mpf(fit.theta.digits) - th)
        if best is None or err < best[0]:
            best = (err, alpha.real, th)
    if best is None:
        notes.append("no real exponent at the dominant singularity")
        return CrossValidation(False, root_str, float(pred_growth), float(g_err), None, None, None, tuple(notes))
    t_err, alpha, th = best
    t_tol = config.gauge_factor * fit.theta.gauge + config.theta_floor
    ok = g_err <= g_tol and t_err <= t_tol and not ties
    return CrossValidation(bool(ok), root_str, float(pred_growth), float(g_err),
                           ctx.nstr(alpha, 20), float(th), float(t_err), tuple(notes))
