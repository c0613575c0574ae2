import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import APERY_TERM, apery_direct
from holoscope.multisum import (
    ExactSequence,
    SequenceFormatError,
    eval_sequence,
    format_sequence,
    from_values,
    parse_sequence,
    read_sequence,
    write_sequence,
)
from holoscope.terms import InfiniteSupportError, enumerate_support, eval_term, parse_term

APERY = parse_term(APERY_TERM)


@pytest.fixture(scope="module")
def apery60():
    return eval_sequence(APERY, 60)


def test_apery_prefix(apery60):
    assert apery60.values[:5] == (1, 5, 73, 1445, 33001)
    assert apery60.provenance == "multisum" and apery60.offset == 0


def test_apery_matches_direct_oracle(apery60):
    assert [int(v) for v in apery60.values] == [apery_direct(n) for n in range(61)]


def test_apery_integral(apery60):
    assert all(v.denominator == 1 for v in apery60.values)


def test_binomial_row_sums():
    s = eval_sequence(parse_term("sum k: binom(n,k)"), 20)
    assert s.values == tuple(Fraction(2**n) for n in range(21))


def test_empty_slice_contributes_zero():
    # k >= 2 and k <= n: nothing at n = 0, 1
    s = eval_sequence(parse_term("sum k: (k-2)! * (k-2)!^-1 * (n-k)! * (n-k)!^-1"), 5)
    assert s.values == (0, 0, 1, 2, 3, 4)


def test_infinite_support_propagates():
    with pytest.raises(InfiniteSupportError):
        eval_sequence(parse_term("sum k: binom(n+k, k)"), 3)


def test_term_by_term_and_schedule_independence():
    t = parse_term("sum i, j: (-2)^i * binom(n, i) * binom(n - i, j) * (i+j)! * i!^-1 * j!^-1")
    s = eval_sequence(t, 9)
    for n in range(10):
        pts = list(enumerate_support(t, n))
        assert s[n] == sum((eval_term(t, n, k) for k in pts), Fraction(0))
        random.Random(n).shuffle(pts)
        with ThreadPoolExecutor(4) as pool:
            parts = list(pool.map(lambda k: eval_term(t, n, k), pts))
        assert sum(parts, Fraction(0)) == s[n]


def test_absolute_indexing():
    s = from_values([3, 4, 5], offset=2)
    assert s[2] == 3 and s[4] == 5 and s.last == 4
    with pytest.raises(IndexError):
        s[1]


def test_digest_stable_and_sensitive():
    a = from_values([1, 2, Fraction(3, 7)])
    assert a.digest() == from_values([1, 2, Fraction(6, 14)]).digest()
    assert a.digest() != from_values([1, 2, Fraction(3, 7)], offset=1).digest()
    assert a.digest() != from_values([1, 2, Fraction(4, 7)]).digest()


def test_huge_values_roundtrip():
    big = Fraction(7**9000, 3**5000 + 1)
    s = from_values([big, 1])
    assert parse_sequence(format_sequence(s)) == s
    assert len(s.digest()) == 64


values = st.lists(st.fractions(max_denominator=10**6), max_size=30)


@given(values, st.integers(0, 50))
def test_format_roundtrip(vals, offset):
    s = from_values(vals, offset)
    assert parse_sequence(format_sequence(s)) == s


def test_file_roundtrip(tmp_path):
    s = from_values([0, 1, 11, 65, 314, Fraction(9593, 7)])
    path = tmp_path / "a.seq"
    write_sequence(path, s)
    assert read_sequence(path) == s


def test_parse_accepts_comments_and_bare_integers():
    s = parse_sequence("# header\n\noffset 1\n2   # a_1\n-3/4\n")
    assert s.offset == 1 and s.values == (2, Fraction(-3, 4))


@pytest.mark.parametrize(
    "text, line",
    [("1\n2\n", 1), ("offset -1\n", 1), ("offset 0\n1\n0.5\n", 3), ("offset 0\n1/0\n", 2), ("# nothing\n", 1)],
)
def test_parse_errors(text, line):
    with pytest.raises(SequenceFormatError) as info:
        parse_sequence(text)
    assert info.value.line == line


def test_rejects_unknown_provenance():
    with pytest.raises(ValueError):
        ExactSequence(0, (1,), "guessed")
