import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adomian.series import (
    SeriesError,
    SeriesVec,
    SingularSeriesError,
    cauchy_product,
    enumerate_partitions,
    enumerate_weak_compositions,
    int_power,
    partition_count,
    quotient,
    repeated_power,
    weak_composition_count,
)


def F(*xs):
    return SeriesVec(Fraction(x) for x in xs)


def test_cauchy_examples():
    assert cauchy_product(F(1, 1, 0), F(1, 1, 0)) == F(1, 2, 1)
    a = F(3, -2, 5, 7)
    assert cauchy_product(a, F(1, 0, 0, 0)) == a
    assert cauchy_product(F(1, 2, 3), F(4, 5, 6)) == F(4, 13, 28)


def test_order_mismatch():
    with pytest.raises(SeriesError):
        cauchy_product(F(1, 2), F(1, 2, 3))
    with pytest.raises(SeriesError):
        quotient(F(1, 2), F(1, 2, 3))


def test_quotient_examples():
    assert quotient(F(1, 0, 0, 0), F(1, 1, 0, 0)) == F(1, -1, 1, -1)
    a = F(2, 3, -1)
    assert quotient(a, a) == F(1, 0, 0)
    with pytest.raises(SingularSeriesError):
        quotient(F(1, 1), F(0, 1))


def test_int_power_examples():
    assert int_power(F(1, 1), 2) == F(1, 2)
    a = F(4, -1, 9)
    assert int_power(a, 1) is a
    assert int_power(F(2, 1, 3), 3) == repeated_power(F(2, 1, 3), 3)
    with pytest.raises(SingularSeriesError):
        int_power(F(0, 1, 2), 2)
    with pytest.raises(SeriesError):
        int_power(F(1, 1), 0)


def test_truncate():
    assert F(1, 2, 3).truncate(1) == F(1, 2)
    with pytest.raises(SeriesError):
        F(1, 2).truncate(3)
    with pytest.raises(SeriesError):
        SeriesVec([])


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def series_pair(draw):
    n = draw(st.integers(0, 6))
    a = [draw(rationals.filter(lambda x: x != 0))] + draw(st.lists(rationals, min_size=n, max_size=n))
    b = draw(st.lists(rationals, min_size=n + 1, max_size=n + 1))
    return SeriesVec(a), SeriesVec(b)


@given(series_pair())
def test_quotient_roundtrip_exact(pair):
    a, b = pair
    assert cauchy_product(quotient(b, a), a) == b


@settings(deadline=None)
@given(st.integers(0, 10), st.integers(0, 2**32 - 1))
def test_quotient_roundtrip_complex(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    a[0] = 1 + 0.5j
    b = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    back = np.array(cauchy_product(quotient(b, a), a).coeffs)
    assert np.max(np.abs(back - b)) <= 1e-12 * max(1.0, np.max(np.abs(b))) * 10 ** (n / 4)


@settings(deadline=None, max_examples=60)
@given(st.integers(1, 6), st.integers(0, 10), st.data())
def test_int_power_matches_repeated(p, n, data):
    a = data.draw(st.lists(rationals, min_size=n, max_size=n))
    a = SeriesVec([data.draw(rationals.filter(lambda x: x != 0))] + a)
    assert int_power(a, p) == repeated_power(a, p)


def test_partitions_examples():
    assert [p.parts() for p in enumerate_partitions(0)] == [()]
    assert [p.parts() for p in enumerate_partitions(3)] == [(3,), (2, 1), (1, 1, 1)]
    assert len(enumerate_partitions(5)) == 7


def _brute_partitions(n):
    ranges = [range(n // j + 1) for j in range(1, n + 1)]
    return {k for k in itertools.product(*ranges) if sum(j * x for j, x in enumerate(k, 1)) == n}


@pytest.mark.parametrize("n", range(0, 11))
def test_partitions_brute_force(n):
    got = [p.multiplicities for p in enumerate_partitions(n)]
    assert len(got) == len(set(got))
    assert set(got) == _brute_partitions(n)
    assert all(p.n == n for p in enumerate_partitions(n))


def test_partition_counts_up_to_20():
    for n in range(21):
        assert len(enumerate_partitions(n)) == partition_count(n)
    assert partition_count(20) == 627


def test_weak_compositions():
    assert enumerate_weak_compositions(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert enumerate_weak_compositions(0, 3) == [(0, 0, 0)]
    brute = [(a, b, c) for a in range(5) for b in range(5) for c in range(5) if a + b + c == 4]
    got = enumerate_weak_compositions(4, 3)
    assert sorted(got) == sorted(brute) and len(got) == 15 == weak_composition_count(4, 3)
    with pytest.raises(ValueError):
        enumerate_weak_compositions(1, 0)
