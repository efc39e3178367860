from fractions import Fraction
from math import comb, factorial

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from escgen.bell import bell_exponential, bell_ordinary, bell_table, compositions

from oracles import all_compositions

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def nk_pairs(max_n=12):
    return st.integers(1, max_n).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n)))


def test_bell_examples():
    assert bell_exponential(3, 2, [1, 2]) == 6
    assert bell_exponential(5, 5, [3]) == 243
    assert bell_exponential(4, 1, [0, 0, 0, 7]) == 7
    assert bell_exponential(4, 2, [1, 2, 6]) == 36


def test_ordinary_examples():
    half = Fraction(1, 2)
    assert bell_ordinary(3, 2, [half, half]) == half
    assert bell_ordinary(2, 2, [half]) == Fraction(1, 4)
    assert bell_ordinary(4, 1, [0, 0, 0, Fraction(1, 3)]) == Fraction(1, 3)


def test_compositions_examples():
    assert set(compositions(3, 2)) == {(1, 2), (2, 1)}
    assert list(compositions(4, 4)) == [(1, 1, 1, 1)]
    assert len(list(compositions(6, 3))) == 10


@pytest.mark.parametrize("n,k", [(0, 0), (3, 0), (3, 4), (2, -1)])
def test_k_out_of_range(n, k):
    with pytest.raises(ValueError):
        bell_exponential(n, k, [1] * 5)
    with pytest.raises(ValueError):
        list(compositions(n, k))


def test_too_few_arguments():
    with pytest.raises(ValueError):
        bell_exponential(5, 2, [1, 2, 3])
    with pytest.raises(ValueError):
        bell_ordinary(5, 1, [1])


@given(nk_pairs(14))
def test_compositions_match_bitmask_enumeration(nk):
    n, k = nk
    got = list(compositions(n, k))
    assert got == sorted(got)
    assert set(got) == {c for c in all_compositions(n) if len(c) == k}
    assert len(got) == comb(n - 1, k - 1)


@given(nk_pairs(10), st.data())
def test_ordinary_matches_composition_sum(nk, data):
    n, k = nk
    x = data.draw(st.lists(fractions, min_size=n, max_size=n))
    brute = sum((_prod(x[s - 1] for s in c) for c in all_compositions(n) if len(c) == k), Fraction(0))
    assert bell_ordinary(n, k, x) == brute


def _prod(it):
    out = Fraction(1)
    for v in it:
        out *= v
    return out


def _bell_by_set_partitions(n, k, x):
    # B_{n,k} counts set partitions of n labelled items into k blocks,
    # weighting a block of size j by x_j.
    def rec(items, blocks):
        if not items:
            return Fraction(1) if blocks == 0 else Fraction(0)
        if blocks == 0:
            return Fraction(0)
        first, rest = items[0], items[1:]
        total = Fraction(0)
        # choose the other members of the block holding ``first``
        for mask in range(1 << len(rest)):
            size = 1 + bin(mask).count("1")
            if size - 1 >= len(x):
                continue
            left = [r for i, r in enumerate(rest) if not mask >> i & 1]
            total += x[size - 1] * rec(left, blocks - 1)
        return total

    return rec(list(range(n)), k)


@given(nk_pairs(8), st.data())
def test_exponential_matches_set_partition_count(nk, data):
    n, k = nk
    x = data.draw(st.lists(fractions, min_size=n - k + 1, max_size=n - k + 1))
    assert bell_exponential(n, k, x) == _bell_by_set_partitions(n, k, x)


@given(nk_pairs(15), st.data())
def test_scaling_identity(nk, data):
    n, k = nk
    x = data.draw(st.lists(fractions, min_size=n - k + 1, max_size=n - k + 1))
    a, b = data.draw(fractions), data.draw(fractions)
    lhs = bell_exponential(n, k, [a**i * b * xi for i, xi in enumerate(x, start=1)])
    assert lhs == a**n * b**k * bell_exponential(n, k, x)


@given(nk_pairs(15))
def test_idempotent_and_factorial_identities(nk):
    n, k = nk
    assert bell_exponential(n, k, list(range(1, n - k + 2))) == comb(n, k) * k ** (n - k)
    fact = bell_exponential(n, k, [factorial(i) for i in range(1, n - k + 2)])
    assert fact * factorial(k) == comb(n - 1, k - 1) * factorial(n)


def test_table_rows_sum_to_bell_numbers():
    # all-ones arguments give Stirling numbers of the second kind
    B = bell_table(10, [1] * 10)
    assert [sum(row) for row in B] == [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]


def test_table_accepts_mpmath():
    with mpmath.workdps(30):
        val = bell_exponential(6, 3, [mpmath.mpf(1) / 3] * 4)
        assert mpmath.almosteq(val, mpmath.mpf(90) / 27, 1e-25)
