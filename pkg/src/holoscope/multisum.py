"""Exact multisum sequences a_n = sum over the support slice of t(n, k)."""

from __future__ import annotations

import hashlib
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .terms import BalancedTerm, InfiniteSupportError, enumerate_support, eval_term, recession_witness

PROVENANCES = ("multisum", "recurrence-extension", "external")


class SequenceFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


@dataclass(frozen=True)
class ExactSequence:
    """values[i] is a_{offset + i}; contiguous, exact rationals."""

    offset: int
    values: tuple[Fraction, ...]
    provenance: str = "external"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if self.offset < 0:
            raise ValueError("offset must be a natural number")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Fraction:
        """a_n by absolute index n."""
        i = n - self.offset
        if not 0 <= i < len(self.values):
            raise IndexError(f"a_{n} is outside [{self.offset}, {self.last}]")
        return self.values[i]

    @property
    def last(self) -> int:
        return self.offset + len(self.values) - 1

    def indices(self) -> range:
        return range(self.offset, self.offset + len(self.values))

    def items(self) -> Iterable[tuple[int, Fraction]]:
        return zip(self.indices(), self.values)

    def head(self, count: int) -> "ExactSequence":
        return ExactSequence(self.offset, self.values[:count], self.provenance)

    def scaled(self, c) -> "ExactSequence":
        c = Fraction(c)
        return ExactSequence(self.offset, tuple(v * c for v in self.values), self.provenance)

    def digest(self) -> str:
        """sha256 over offset and values (hex numerators/denominators, so size is no issue)."""
        h = hashlib.sha256()
        h.update(f"offset {self.offset}\n".encode())
        for v in self.values:
            h.update(f"{v.numerator:x}/{v.denominator:x}\n".encode())
        return h.hexdigest()


def eval_sequence(t: BalancedTerm, n_max: int) -> ExactSequence:
    """Exact a_0 .. a_{n_max}, summing over k in lexicographic order."""
    witness = recession_witness(t)
    if witness is not None:
        raise InfiniteSupportError(witness)
    values = []
    for n in range(n_max + 1):
        total = Fraction(0)
        for k in enumerate_support(t, n):
            total += eval_term(t, n, k)
        values.append(total)
    return ExactSequence(0, tuple(values), "multisum")


# file format ------------------------------------------------------------------

@contextmanager
def unlimited_int_digits():
    """Lift the interpreter's int/str conversion cap for long exact values."""
    getter = getattr(sys, "get_int_max_str_digits", None)
    if getter is None:
        yield
        return
    old = getter()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def format_sequence(s: ExactSequence) -> str:
    lines = [f"# provenance: {s.provenance}", f"offset {s.offset}"]
    with unlimited_int_digits():
        lines += [str(v) for v in s.values]
    return "\n".join(lines) + "\n"


def parse_sequence(text: str, provenance: str = "external") -> ExactSequence:
    """Read the sequence format: '#' comments, a first line 'offset N', then one value per line."""
    with unlimited_int_digits():
        return _parse_sequence(text, provenance)


def _parse_sequence(text: str, provenance: str) -> ExactSequence:
    offset = None
    values: list[Fraction] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if offset is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "offset":
                raise SequenceFormatError("first non-comment line must be 'offset N'", lineno)
            try:
                offset = int(parts[1])
            except ValueError:
                raise SequenceFormatError(f"bad offset {parts[1]!r}", lineno) from None
            if offset < 0:
                raise SequenceFormatError("offset must be nonnegative", lineno)
            continue
        try:
            if "." in line or "e" in line.lower():
                raise ValueError
            values.append(Fraction(line.replace(" ", "")))
        except (ValueError, ZeroDivisionError):
            raise SequenceFormatError(f"not an exact rational: {line!r}", lineno) from None
    if offset is None:
        raise SequenceFormatError("missing 'offset N' line", 1)
    return ExactSequence(offset, tuple(values), provenance)


def read_sequence(path, provenance: str = "external") -> ExactSequence:
    with open(path, encoding="utf-8") as fh:
        return parse_sequence(fh.read(), provenance)


def write_sequence(path, s: ExactSequence) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_sequence(s))


def from_values(values: Sequence, offset: int = 0, provenance: str = "external") -> ExactSequence:
    return ExactSequence(offset, tuple(Fraction(v) for v in values), provenance)
