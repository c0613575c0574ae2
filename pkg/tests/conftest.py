import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from holoscope.exact import Poly
from holoscope.guess import Recurrence, extend_sequence

settings.register_profile(
    "default", deadline=None, max_examples=60, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

APERY_TERM = "sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2"


def apery_direct(n: int) -> int:
    """Independent oracle: sum of binom(n,k)^2 binom(n+k,k)^2."""
    return sum(math.comb(n, k) ** 2 * math.comb(n + k, k) ** 2 for k in range(n + 1))


def counter_direct(n_max: int) -> list[Fraction]:
    """Independent oracle: plain loop over (2n+1)a_{n+2} = (7n+11)a_{n+1} - (2n+1)a_n."""
    a = [Fraction(0), Fraction(1)]
    for n in range(n_max - 1):
        a.append(((7 * n + 11) * a[n + 1] - (2 * n + 1) * a[n]) / (2 * n + 1))
    return a[: n_max + 1]


def counter_rec() -> Recurrence:
    return Recurrence((Poly([1, 2]), Poly([-11, -7]), Poly([1, 2])))


def apery_rec() -> Recurrence:
    return Recurrence((Poly([1, 3, 3, 1]), Poly([-117, -231, -153, -34]), Poly([8, 12, 6, 1])))


def mixed_rec() -> Recurrence:
    return Recurrence((Poly([6, 4]), Poly([-39, -16]), Poly([24, 11]), Poly([-3, -2])))


@pytest.fixture(scope="session")
def counter_seq():
    return extend_sequence(counter_rec(), [0, 1], 2000)


@pytest.fixture(scope="session")
def apery_seq():
    return extend_sequence(apery_rec(), [1, 5], 400)
