import json
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitary_dft.zn import (
    DivisorSet,
    IndexSet,
    Modulus,
    bracelet,
    digits_base_p,
    divisors_proper,
    factorize,
    first_nonzero_digit_index,
    from_digits,
    gcd_class,
)


def trial_division_divisors(n):
    return [a for a in range(1, n) if n % a == 0]


@pytest.mark.parametrize(
    "n, expected",
    [(16, (1, 2, 4, 8)), (6, (1, 2, 3)), (72, (1, 2, 3, 4, 6, 8, 9, 12, 18, 24, 36))],
)
def test_divisors_proper_examples(n, expected):
    assert divisors_proper(n) == expected


@given(st.integers(2, 5000))
def test_divisors_proper_matches_trial_division(n):
    assert list(divisors_proper(n)) == trial_division_divisors(n)


@given(st.integers(2, 10**6))
def test_factorization_multiplies_back(n):
    f = Modulus(n).factorization
    prod = 1
    for q, e in f:
        assert e >= 1
        prod *= q**e
    assert prod == n
    assert [q for q, _ in f] == sorted({q for q, _ in f})


def test_prime_power_detection():
    assert Modulus(16).prime_power == (2, 4)
    assert Modulus(27).prime_power == (3, 3)
    assert Modulus(7).prime_power == (7, 1)
    assert Modulus(12).prime_power is None


def test_modulus_rejects_small():
    with pytest.raises(ValueError):
        Modulus(1)


@pytest.mark.parametrize("i, n, k", [(12, 16, 4), (0, 16, 16), (31, 72, 1)])
def test_gcd_class_examples(i, n, k):
    assert gcd_class(i, n) == k


@given(st.integers(2, 400).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_nonzero_gcd_class_is_proper_divisor(pair):
    n, i = pair
    assert gcd_class(i, n) in divisors_proper(n)


def test_digits_examples():
    assert digits_base_p(10, 2, 4) == (0, 1, 0, 1)
    assert digits_base_p(0, 3, 3) == (0, 0, 0)
    assert digits_base_p(5, 2, 4) == (1, 0, 1, 0)
    with pytest.raises(ValueError):
        digits_base_p(16, 2, 4)


@given(st.sampled_from([(2, 6), (3, 4), (5, 3), (7, 2)]).flatmap(lambda pm: st.tuples(st.just(pm), st.integers(0, pm[0] ** pm[1] - 1))))
def test_digits_round_trip(case):
    (p, m), z = case
    digits = digits_base_p(z, p, m)
    assert all(0 <= a < p for a in digits)
    assert from_digits(digits, p) == z


def test_first_nonzero_digit_examples():
    assert first_nonzero_digit_index(8, 2, 4) == 3
    assert first_nonzero_digit_index(12, 2, 4) == 2
    assert first_nonzero_digit_index(0, 2, 4) is None


@pytest.mark.parametrize("p, m", [(2, 14), (3, 8), (5, 5), (7, 4)])
def test_first_nonzero_digit_agrees_with_gcd_exhaustively(p, m):
    n = p**m
    for z in range(1, n):
        assert p ** first_nonzero_digit_index(z, p, m) == gcd(z, n)


def test_bracelet_examples():
    assert bracelet(IndexSet(4, (0,))) == {IndexSet(4, (k,)) for k in range(4)}
    assert bracelet(IndexSet(4, (0, 1))) == {IndexSet(4, s) for s in [(0, 1), (1, 2), (2, 3), (0, 3)]}
    assert IndexSet(16, (1, 3, 9, 11)) in bracelet(IndexSet(16, (0, 2, 8, 10)))


@settings(max_examples=60)
@given(st.integers(2, 30).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, n - 1), min_size=1))))
def test_bracelet_is_closed_orbit(case):
    n, elems = case
    orbit = bracelet(IndexSet(n, tuple(elems)))
    for member in orbit:
        assert member.translate(-1) in orbit
        assert member.negate() in orbit
    assert (2 * n) % len(orbit) == 0


def test_index_set_canonical_and_json():
    a = IndexSet(16, (10, 0, 8, 2))
    assert a.elements == (0, 2, 8, 10)
    assert a == IndexSet(16, (0, 2, 8, 10))
    assert hash(a) == hash(IndexSet(16, (0, 2, 8, 10)))
    data = json.loads(json.dumps(a.to_json()))
    assert data == {"n": 16, "elements": [0, 2, 8, 10]}
    assert IndexSet.from_json(data) == a


@pytest.mark.parametrize("bad", [(0, 0), (16,), (-1,)])
def test_index_set_validation(bad):
    with pytest.raises(ValueError):
        IndexSet(16, bad)


def test_divisor_set_validation_and_logs():
    d = DivisorSet(16, (8, 2))
    assert d.divisors == (2, 8)
    assert d.log_columns() == (1, 3)
    assert d.complement().divisors == (1, 4)
    assert DivisorSet.from_log_columns(2, 4, (1, 3)) == d
    with pytest.raises(ValueError):
        DivisorSet(16, (3,))
    with pytest.raises(ValueError):
        DivisorSet(16, (16,))


def test_factorize_small():
    assert factorize(72) == ((2, 3), (3, 2))
