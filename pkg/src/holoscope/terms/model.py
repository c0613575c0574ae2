"""Data model for hypergeometric terms built from factorials of integer linear forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LinearForm:
    """Affine integer form  coeff_n*n + sum(coeff_k[i]*k_i) + constant."""

    coeff_n: int
    coeff_k: tuple[int, ...]
    constant: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff_k", tuple(int(c) for c in self.coeff_k))
        for c in (self.coeff_n, self.constant, *self.coeff_k):
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError(f"linear form coefficients must be integers, got {c!r}")

    @classmethod
    def zero(cls, r: int) -> "LinearForm":
        return cls(0, (0,) * r, 0)

    @property
    def r(self) -> int:
        return len(self.coeff_k)

    def __call__(self, n: int, k: Sequence[int]) -> int:
        return self.coeff_n * n + sum(c * x for c, x in zip(self.coeff_k, k)) + self.constant

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(
            self.coeff_n + other.coeff_n,
            tuple(a + b for a, b in zip(self.coeff_k, other.coeff_k)),
            self.constant + other.constant,
        )

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.coeff_n, tuple(-c for c in self.coeff_k), -self.constant)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, s: int) -> "LinearForm":
        return LinearForm(s * self.coeff_n, tuple(s * c for c in self.coeff_k), s * self.constant)

    def is_zero(self) -> bool:
        return self.coeff_n == 0 and self.constant == 0 and not any(self.coeff_k)

    def k_part_is_zero(self) -> bool:
        return not any(self.coeff_k)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else [f"k{i + 1}" for i in range(self.r)]
        terms = [(self.coeff_n, "n")] + list(zip(self.coeff_k, names)) + [(self.constant, "")]
        out = ""
        for c, v in terms:
            if c == 0:
                continue
            mag = abs(c)
            body = v if (mag == 1 and v) else (f"{mag}*{v}" if v else str(mag))
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out or "0"

    def __str__(self) -> str:
        return self.to_str()


@dataclass(frozen=True)
class BalancedTerm:
    """C0^n * prod C_i^{k_i} * prod A_j(n,k)!^{eps_j}.

    ``factors`` holds (form, sign) pairs with sign = +1 (numerator) or -1.
    Balance is a property checked separately, not enforced at construction.
    """

    C0: Fraction
    C: tuple[Fraction, ...]
    factors: tuple[tuple[LinearForm, int], ...]
    var_names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "C0", Fraction(self.C0))
        object.__setattr__(self, "C", tuple(Fraction(c) for c in self.C))
        object.__setattr__(self, "factors", tuple((f, int(s)) for f, s in self.factors))
        r = len(self.C)
        if not self.factors:
            raise ValueError("a term needs at least one factorial factor")
        for form, sign in self.factors:
            if form.r != r:
                raise ValueError(f"form {form} has {form.r} summation variables, expected {r}")
            if sign not in (1, -1):
                raise ValueError(f"factor sign must be +1 or -1, got {sign}")
        if self.C0 == 0 or any(c == 0 for c in self.C):
            raise ValueError("constants C0 and C_i must be nonzero")
        if not self.var_names:
            object.__setattr__(self, "var_names", tuple(f"k{i + 1}" for i in range(r)))

    @property
    def r(self) -> int:
        return len(self.C)

    def grouped(self) -> list[tuple[LinearForm, int]]:
        """Factors merged into (form, exponent) pairs, first-appearance order."""
        exps: dict[LinearForm, int] = {}
        for form, sign in self.factors:
            exps[form] = exps.get(form, 0) + sign
        return [(f, e) for f, e in exps.items() if e]

    def to_str(self) -> str:
        parts = []
        if self.C0 != 1:
            parts.append(f"({self.C0})^n")
        for c, v in zip(self.C, self.var_names):
            if c != 1:
                parts.append(f"({c})^{v}")
        for form, e in self.grouped():
            s = form.to_str(self.var_names)
            base = f"{s}!" if s.isidentifier() else f"({s})!"
            parts.append(base + ("" if e == 1 else f"^{e}"))
        return f"sum {', '.join(self.var_names)}: " + " * ".join(parts)

    def __str__(self) -> str:
        return self.to_str()


@dataclass(frozen=True)
class BinomialForm:
    """C0^n * prod C_i^{k_i} * prod binom(top, bottom)^{sign}."""

    C0: Fraction
    C: tuple[Fraction, ...]
    binomials: tuple[tuple[LinearForm, LinearForm, int], ...]


@dataclass(frozen=True)
class SupportSlice:
    """All lattice points k with A_j(n, k) >= 0 for every factor, lexicographically sorted."""

    n: int
    points: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)
