import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import apery_rec, counter_rec
from holoscope.asymptotics import (
    AsymptoticFit,
    CrossValidationConfig,
    Estimate,
    FitError,
    NoDominantRatioError,
    classify_gevrey,
    cross_validate,
    fit_exponent,
    fit_growth,
    fit_sequence,
    make_context,
    precision_digits,
    richardson_table,
    synthetic_power_sequence,
)
from holoscope.guess import Recurrence, extend_sequence
from holoscope.exact import Poly
from holoscope.multisum import from_values
from holoscope.ode import rec_to_ode, singular_points

SQ33 = math.sqrt(33)
COUNTER_GROWTH = (7 + SQ33) / 4
COUNTER_THETA = 5 * SQ33 / 22
APERY_GROWTH = (1 + math.sqrt(2)) ** 4

GEOMETRIC = Recurrence((Poly([-2]), Poly([1])))


@pytest.fixture(scope="module")
def counter_fit(counter_seq):
    return fit_sequence(counter_seq)


@pytest.fixture(scope="module")
def apery_fit(apery_seq):
    return fit_sequence(apery_seq)


def test_richardson_kills_polynomial_corrections():
    ctx = make_context(40)
    table = richardson_table(lambda n: 3 + ctx.mpf(1) / n - ctx.mpf(2) / n**2 + ctx.mpf(5) / n**3, 100, 3, ctx)
    assert abs(table[-1] - 3) < ctx.mpf(10) ** -30


def test_geometric_fit():
    s = from_values([2**n for n in range(200)])
    g = fit_growth(s)
    assert g.value == 2.0 and g.gauge == 0.0
    assert fit_exponent(s, g).value == 0.0
    assert classify_gevrey(s)[0] == 0


def test_counter_growth(counter_fit):
    assert abs(counter_fit.growth.value - COUNTER_GROWTH) <= 1e-6
    assert counter_fit.s_class == 0


def test_counter_theta(counter_fit):
    assert abs(counter_fit.theta.value - COUNTER_THETA) <= 1e-2


def test_apery_fit(apery_fit):
    assert apery_fit.s_class == 0
    assert abs(apery_fit.growth.value - APERY_GROWTH) <= 1e-3
    assert abs(apery_fit.theta.value + 1.5) <= 5e-2


def test_apery_growth_matches_characteristic_root():
    # characteristic polynomial of the recurrence's leading terms: x^2 - 34 x + 1
    ctx = make_context(30)
    roots = ctx.polyroots([1, -34, 1])
    assert abs(max(abs(r) for r in roots) - APERY_GROWTH) < 1e-12


def test_gevrey_factorial():
    s = from_values([math.factorial(n) for n in range(120)])
    s_class, raw, gauge = classify_gevrey(s)
    assert s_class == 1
    fit = fit_sequence(s)
    assert fit.growth is None and fit.notes


def test_gevrey_apery(apery_seq):
    assert classify_gevrey(apery_seq)[0] == 0


def test_gevrey_too_short():
    with pytest.raises(FitError):
        classify_gevrey(from_values([1] * 20))


# synthetic grid ---------------------------------------------------------------------

GRID = [(lam, th) for lam in (Fraction(1, 2), Fraction(2), Fraction(10)) for th in (Fraction(-3, 2), Fraction(0), Fraction(5, 2))]


@pytest.mark.parametrize("lam, theta", GRID, ids=[f"{l}-{t}" for l, t in GRID])
def test_synthetic_grid(lam, theta):
    s = synthetic_power_sequence(lam, theta, 500)
    g = fit_growth(s, 4)
    t = fit_exponent(s, g, 4)
    assert abs(g.value - float(lam)) <= 1e-8
    assert abs(t.value - float(theta)) <= 1e-4


@given(st.fractions(min_value=Fraction(1, 5), max_value=20, max_denominator=9).filter(bool),
       st.integers(1, 10**6))
@settings(max_examples=15)
def test_scaling_invariance(c, seed):
    rnd = random.Random(seed)
    lam = Fraction(rnd.randint(1, 40), rnd.randint(1, 8))
    s = synthetic_power_sequence(lam, Fraction(rnd.randint(-6, 6), 2), 300, digits=50)
    a, b = fit_sequence(s), fit_sequence(s.scaled(c))
    assert a.growth.value == b.growth.value and a.theta.value == b.theta.value
    assert a.s_class == b.s_class


def _perturbed_power(lam, theta, c1, c2, n_max, digits=60):
    ctx = make_context(digits + 10)
    L, T = ctx.mpf(lam.numerator) / lam.denominator, ctx.mpf(theta)
    vals = []
    for n in range(1, n_max + 1):
        v = L**n * ctx.mpf(n) ** T * (1 + ctx.mpf(c1) / n + ctx.mpf(c2) / n**2)
        vals.append(Fraction(ctx.nstr(v, digits)))
    return from_values(vals, offset=1)


def test_gauges_honest():
    rnd = random.Random(20240917)
    trials, honest = 40, 0
    for _ in range(trials):
        lam = Fraction(rnd.randint(1, 60), rnd.randint(1, 6))
        theta = rnd.uniform(-3, 3)
        s = _perturbed_power(lam, theta, rnd.uniform(-2, 2), rnd.uniform(-2, 2), rnd.randint(200, 500))
        g = fit_growth(s)
        t = fit_exponent(s, g)
        # the only slack is double rounding of the reported value
        ok_g = abs(g.value - float(lam)) <= 10 * g.gauge + 4e-16 * float(lam)
        ok_t = abs(t.value - theta) <= 10 * t.gauge
        honest += ok_g and ok_t
    assert honest >= 0.95 * trials


# failure modes ----------------------------------------------------------------------

def test_alternating_magnitudes_have_no_dominant_ratio():
    s = from_values([2**n * (3 if n % 2 else 1) for n in range(200)])
    with pytest.raises(NoDominantRatioError):
        fit_growth(s)


def test_sign_changes_have_no_dominant_ratio():
    # Re((3 + 4i)^n): complex-conjugate pair of dominant singularities
    vals = []
    a, b = 1, 0
    for _ in range(200):
        vals.append(a)
        a, b = 3 * a - 4 * b, 4 * a + 3 * b
    with pytest.raises(NoDominantRatioError):
        fit_growth(from_values(vals))


def test_constant_negative_ratio_is_fine():
    g = fit_growth(from_values([(-3) ** n for n in range(200)]))
    assert g.value == 3.0


def test_zero_tail_and_short_input():
    with pytest.raises(FitError):
        fit_growth(from_values([1] * 10 + [0] * 190))
    with pytest.raises(FitError):
        fit_growth(from_values([2**n for n in range(100)]), depth=4)
    with pytest.raises(NoDominantRatioError):
        fit_growth(from_values([n % 3 for n in range(200)]))


def test_precision_env(monkeypatch):
    monkeypatch.setenv("HOLOSCOPE_PRECISION", "50")
    assert precision_digits() == 50
    monkeypatch.setenv("HOLOSCOPE_PRECISION", "5")
    assert precision_digits() == 15
    monkeypatch.setenv("HOLOSCOPE_PRECISION", "lots")
    with pytest.raises(FitError):
        precision_digits()


# cross-validation -------------------------------------------------------------------

def test_cross_validate_counter(counter_fit):
    rep = singular_points(rec_to_ode(counter_rec(), [0, 1]))
    cv = cross_validate(counter_fit, rep)
    assert cv.consistent
    assert abs(float(cv.matched_root) - (7 - SQ33) / 4) < 1e-15
    assert abs(float(cv.matched_exponent) - (-1 - 2.5 * math.sqrt(3 / 11))) < 1e-15


def test_cross_validate_geometric():
    s = extend_sequence(GEOMETRIC, [1], 300)
    rep = singular_points(rec_to_ode(GEOMETRIC, [1]))
    cv = cross_validate(fit_sequence(s), rep)
    assert cv.consistent and float(cv.matched_root) == 0.5 and float(cv.matched_exponent) == -1


def _shift_theta(fit: AsymptoticFit, delta: float) -> AsymptoticFit:
    t = fit.theta
    ctx = make_context()
    moved = ctx.mpf(t.digits) + ctx.mpf(delta)
    theta = Estimate(float(moved), t.gauge, ctx.nstr(moved, ctx.dps), t.extrapolants, t.n_max)
    return AsymptoticFit(fit.growth, theta, fit.s_class, fit.s_raw, fit.s_gauge, fit.notes)


def test_cross_validate_perturbed(counter_fit):
    rep = singular_points(rec_to_ode(counter_rec(), [0, 1]))
    cv = cross_validate(_shift_theta(counter_fit, 0.5), rep)
    assert not cv.consistent
    assert cv.theta_error == pytest.approx(0.5, abs=1e-2)


def test_cross_validate_apery(apery_fit):
    rep = singular_points(rec_to_ode(apery_rec(), [1, 5]))
    cv = cross_validate(apery_fit, rep)
    assert cv.consistent and float(cv.matched_exponent) == pytest.approx(0.5)


def test_cross_validate_tolerances_configurable(counter_fit):
    rep = singular_points(rec_to_ode(counter_rec(), [0, 1]))
    strict = CrossValidationConfig(gauge_factor=0, growth_floor=0, theta_floor=0)
    assert not cross_validate(counter_fit, rep, strict).consistent
