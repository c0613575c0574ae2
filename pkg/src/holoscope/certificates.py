"""Desk-scale arithmetic certificates: height and denominator growth curves, lcm of binomials.

Curves are exact up to a single float conversion per point. Alarms are
heuristics and prove nothing: a curve raises one when it increases across
the dyadic checkpoints N/8, N/4, N/2, N and its log-log slope over the last
doubling is at least ALARM_SLOPE, i.e. it outgrows n^(1/4), which an
exponentially bounded sequence cannot do.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

from .multisum import ExactSequence

ALARM_SLOPE = 0.25

CONSISTENT = "consistent-with-G-function"
DENOMINATOR_ALARM = "denominator-growth-alarm"
HEIGHT_ALARM = "height-growth-alarm"

NOTES = (
    "constants are rational, so bounds on all conjugates reduce to absolute values",
    "alarms are heuristic growth indicators at desk scale, not proofs",
)


@dataclass(frozen=True)
class Curve:
    points: tuple[tuple[int, float], ...]
    bound: float
    alarm: bool
    slope: float | None


@dataclass(frozen=True)
class GCertificate:
    height: Curve
    denominator: Curve
    holonomic: bool
    verdict: str
    notes: tuple[str, ...] = NOTES

    @property
    def height_curve(self):
        return self.height.points

    @property
    def denom_curve(self):
        return self.denominator.points


def _log_abs(x: Fraction) -> float:
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def _nth_root(log_value: float, n: int) -> float:
    return math.exp(log_value / n)


def _checkpoints(points: tuple[tuple[int, float], ...]) -> list[float] | None:
    if not points:
        return None
    by_n = dict(points)
    N = points[-1][0]
    marks = [N // 8, N // 4, N // 2, N]
    if marks[0] < 1 or any(m not in by_n for m in marks):
        return None
    return [by_n[m] for m in marks]


def growth_alarm(points: tuple[tuple[int, float], ...]) -> tuple[bool, float | None]:
    """(alarm, slope of log value against log n over the last doubling)."""
    vals = _checkpoints(points)
    if vals is None or min(vals) <= 0:
        return False, None
    slope = math.log(vals[-1] / vals[-2]) / math.log(points[-1][0] / (points[-1][0] // 2))
    increasing = all(a < b for a, b in zip(vals, vals[1:]))
    return increasing and slope >= ALARM_SLOPE, slope


def _curve(points: list[tuple[int, float]]) -> Curve:
    pts = tuple(points)
    tail = [v for _, v in pts[len(pts) // 2:]]
    alarm, slope = growth_alarm(pts)
    return Curve(pts, max(tail, default=0.0), alarm, slope)


def height_certificate(s: ExactSequence) -> Curve:
    """|a_n|^(1/n) for n >= 1; bound is the maximum over the second half."""
    if all(v == 0 for v in s.values):
        raise ValueError("height certificate of the zero sequence")
    pts = [(n, _nth_root(_log_abs(v), n) if v else 0.0) for n, v in s.items() if n >= 1]
    return _curve(pts)


def running_lcm(s: ExactSequence) -> list[tuple[int, int]]:
    out, L = [], 1
    for n, v in s.items():
        L = math.lcm(L, v.denominator)
        out.append((n, L))
    return out


def denominator_certificate(s: ExactSequence) -> Curve:
    """(lcm of den(a_0..a_n))^(1/n), exact lcm before the float conversion."""
    pts = [(n, _nth_root(math.log(L), n)) for n, L in running_lcm(s) if n >= 1]
    return _curve(pts)


def g_certificate(s: ExactSequence, holonomic: bool) -> GCertificate:
    h = height_certificate(s)
    d = denominator_certificate(s)
    if d.alarm:
        verdict = DENOMINATOR_ALARM
    elif h.alarm:
        verdict = HEIGHT_ALARM
    else:
        verdict = CONSISTENT
    return GCertificate(h, d, holonomic, verdict)


def lcm_binomial(n: int) -> int:
    return math.lcm(*(math.comb(n, k) for k in range(n + 1)))


def lcm_binomial_table(n_max: int) -> list[tuple[int, int, float]]:
    """(n, L_n, log L_n / n) with L_n = lcm of binom(n, k), 0 <= k <= n."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return [(n, L, math.log(L) / n) for n in range(1, n_max + 1) for L in (lcm_binomial(n),)]


def to_csv(rows) -> str:
    """Two-column table with header 'n,value'."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "value"])
    for n, v in rows:
        w.writerow([n, repr(float(v))])
    return buf.getvalue()
