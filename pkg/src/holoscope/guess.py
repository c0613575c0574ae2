"""Guess-and-verify for linear recurrences with polynomial coefficients.

A recurrence sum_j P_j(n) a_{n+j} = 0 is found by exact linear algebra on
an ansatz matrix built from a prefix of the data, and accepted only if it
also holds on every later value (at least ``guard`` of them). Results are
empirically verified, not certified.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

from .exact import Poly, nullspace
from .multisum import ExactSequence

log = logging.getLogger(__name__)

GUARD = 10
ANSATZ_MARGIN = 4


class InsufficientDataError(ValueError):
    def __init__(self, required: int, available: int):
        super().__init__(f"need at least {required} sequence values, got {available}")
        self.required = required
        self.available = available


class SingularStepError(ArithmeticError):
    def __init__(self, n: int):
        super().__init__(f"leading coefficient vanishes at n = {n}; the sequence is not determined past it")
        self.n = n


class RecurrenceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Recurrence:
    """sum_{j=0}^{order} coeffs[j](n) * a_{n+j} = 0."""

    coeffs: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("a recurrence needs order >= 1")
        if not self.coeffs[-1]:
            raise ValueError("leading coefficient P_d must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.coeffs if p)

    def normalized(self) -> "Recurrence":
        """Integer coefficients with joint content 1 and P_d having positive leading coefficient."""
        den = reduce(lcm, (c.denominator for p in self.coeffs for c in p.coeffs), 1)
        ints = [[c * den for c in p.coeffs] for p in self.coeffs]
        g = reduce(gcd, (int(c) for p in ints for c in p), 0)
        if self.coeffs[-1].lc < 0:
            g = -g
        return Recurrence(tuple(Poly([c / g for c in p]) for p in ints))

    def residual(self, s: ExactSequence, n: int) -> Fraction:
        return sum((p(n) * s[n + j] for j, p in enumerate(self.coeffs)), Fraction(0))

    def to_str(self, var: str = "n") -> str:
        parts = []
        for j, p in enumerate(self.coeffs):
            if p:
                parts.append(f"({p.to_str(var)})*a[{var}+{j}]" if j else f"({p.to_str(var)})*a[{var}]")
        return " + ".join(parts) + " = 0"

    def __str__(self) -> str:
        return self.to_str()


def _ansatz_row(s: ExactSequence, n: int, order: int, degree: int) -> list[Fraction]:
    row = []
    for j in range(order + 1):
        a = s[n + j]
        p = Fraction(1)
        for _ in range(degree + 1):
            row.append(a * p)
            p *= n
    return row


def _vector_to_recurrence(v: Sequence[int], order: int, degree: int) -> Recurrence | None:
    polys = [Poly(v[j * (degree + 1):(j + 1) * (degree + 1)]) for j in range(order + 1)]
    if not polys[-1]:
        return None
    return Recurrence(tuple(polys)).normalized()


def _tie_key(r: Recurrence):
    return (r.coeffs[-1].degree, tuple(tuple(p.coeffs) for p in r.coeffs))


def required_length(max_order: int, max_degree: int, guard: int = GUARD) -> int:
    return (max_order + 1) * (max_degree + 1) + max_order + guard


def _try_cell(s: ExactSequence, order: int, degree: int, guard: int, full: bool) -> Recurrence | None:
    unknowns = (order + 1) * (degree + 1)
    rows_available = len(s) - order
    n_eq = rows_available - guard if full else min(rows_available - guard, unknowns + ANSATZ_MARGIN)
    if n_eq < 1:
        return None
    start = s.offset
    M = [_ansatz_row(s, start + i, order, degree) for i in range(n_eq)]
    basis = nullspace(M)
    if not basis:
        return None
    survivors = []
    for v in basis:
        rec = _vector_to_recurrence(v, order, degree)
        if rec is None:
            continue
        held_out = range(start + n_eq, s.last - order + 1)
        if all(rec.residual(s, n) == 0 for n in held_out):
            survivors.append(rec)
    if survivors:
        return min(survivors, key=_tie_key)
    if not full:
        # a nonempty nullspace whose basis vectors all fail: retry with the full ansatz
        return _try_cell(s, order, degree, guard, full=True)
    return None


def guess_recurrence(s: ExactSequence, max_order: int = 6, max_degree: int = 8,
                     guard: int = GUARD) -> Recurrence | None:
    """Minimal (order, then degree) recurrence fitting s, verified on held-out values.

    The ansatz uses the first few equations beyond the number of unknowns;
    every remaining equation (at least ``guard`` of them) must also hold.
    """
    if guard < GUARD:
        raise ValueError(f"guard band must be at least {GUARD}")
    need = required_length(max_order, max_degree, guard)
    if len(s) < need:
        raise InsufficientDataError(need, len(s))
    if all(v == 0 for v in s.values):
        return None
    for order in range(1, max_order + 1):
        for degree in range(max_degree + 1):
            rec = _try_cell(s, order, degree, guard, full=False)
            if rec is not None:
                log.debug("recurrence found at order %d, degree %d", order, degree)
                return rec
    return None


def verify_recurrence(r: Recurrence, s: ExactSequence) -> bool:
    """True iff the recurrence holds exactly at every shift the data allows."""
    if len(s) < r.order + 1:
        raise ValueError(f"sequence of length {len(s)} cannot test a recurrence of order {r.order}")
    return all(r.residual(s, n) == 0 for n in range(s.offset, s.last - r.order + 1))


def _run_forward(r: Recurrence, vals: list[Fraction], offset: int, n_max: int) -> None:
    d = r.order
    lead = r.coeffs[-1]
    lower = r.coeffs[:-1]
    for n in range(offset + len(vals) - d, n_max - d + 1):
        pd = lead(n)
        if pd == 0:
            raise SingularStepError(n)
        i = n - offset
        acc = sum((p(n) * vals[i + j] for j, p in enumerate(lower)), Fraction(0))
        vals.append(-acc / pd)


def extend_sequence(r: Recurrence, initial: Sequence, n_max: int, offset: int = 0) -> ExactSequence:
    """Run the recurrence forward from ``initial`` = (a_offset, ..., a_{offset+d-1}) up to a_{n_max}."""
    if len(initial) != r.order:
        raise ValueError(f"need exactly {r.order} initial values, got {len(initial)}")
    vals = [Fraction(v) for v in initial]
    _run_forward(r, vals, offset, n_max)
    return ExactSequence(offset, tuple(vals[: max(n_max - offset + 1, 0)]), "recurrence-extension")


def continue_sequence(r: Recurrence, s: ExactSequence, n_max: int) -> ExactSequence:
    """Keep every value of s and append recurrence values up to a_{n_max}."""
    if len(s) < r.order:
        raise ValueError(f"need at least {r.order} values to continue an order-{r.order} recurrence")
    vals = list(s.values)
    _run_forward(r, vals, s.offset, n_max)
    provenance = s.provenance if n_max <= s.last else "recurrence-extension"
    return ExactSequence(s.offset, tuple(vals), provenance)


# text format -------------------------------------------------------------------

def format_recurrence(r: Recurrence) -> str:
    lines = [f"order {r.order}"]
    for j, p in enumerate(r.coeffs):
        lines.append(f"P_{j}: " + (" ".join(str(c) for c in p.coeffs) if p else "0"))
    return "\n".join(lines) + "\n"


def parse_recurrence(text: str) -> Recurrence:
    order = None
    coeffs: dict[int, Poly] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if order is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "order":
                raise RecurrenceFormatError(f"line {lineno}: expected 'order d'")
            try:
                order = int(parts[1])
            except ValueError:
                raise RecurrenceFormatError(f"line {lineno}: bad order {parts[1]!r}") from None
            if order < 1:
                raise RecurrenceFormatError(f"line {lineno}: order must be >= 1")
            continue
        head, sep, body = line.partition(":")
        head = head.strip()
        if not sep or not head.startswith("P_"):
            raise RecurrenceFormatError(f"line {lineno}: expected 'P_j: c0 c1 ...'")
        try:
            j = int(head[2:])
            cs = [Fraction(c) for c in body.split()]
        except (ValueError, ZeroDivisionError):
            raise RecurrenceFormatError(f"line {lineno}: bad coefficient line {line!r}") from None
        if not 0 <= j <= order:
            raise RecurrenceFormatError(f"line {lineno}: index {j} outside 0..{order}")
        if j in coeffs:
            raise RecurrenceFormatError(f"line {lineno}: P_{j} given twice")
        coeffs[j] = Poly(cs)
    if order is None:
        raise RecurrenceFormatError("missing 'order d' line")
    try:
        return Recurrence(tuple(coeffs.get(j, Poly()) for j in range(order + 1)))
    except ValueError as exc:
        raise RecurrenceFormatError(str(exc)) from None


def read_recurrence(path) -> Recurrence:
    with open(path, encoding="utf-8") as fh:
        return parse_recurrence(fh.read())
