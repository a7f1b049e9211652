import cmath
import itertools
import threading
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitary_dft.errors import SearchBoundExceeded
from unitary_dft.config import SearchBounds
from unitary_dft.idempotent import (
    Idempotent,
    IntPolynomial,
    cyclotomic,
    divisor_masks,
    divisors_from_zero_set,
    eval_numeric,
    is_block_concatenation_form,
    mask_to_divisors,
    numeric_zero_set,
    prescribe_zero_set,
    ramanujan_sum,
    realizable_divisor_sets,
    totient,
    zero_set,
    zero_set_divisors,
)
from unitary_dft.zn import DivisorSet, IndexSet, divisors_proper, is_prime


def subsets(n_values, min_size=1):
    return st.sampled_from(n_values).flatmap(
        lambda n: st.sets(st.integers(0, n - 1), min_size=min_size).map(lambda s: IndexSet(n, tuple(s)))
    )


def test_eval_numeric_examples():
    n = 16
    full = Idempotent(IndexSet.full(n))
    assert abs(eval_numeric(full, 0) - 1) < 1e-12
    assert all(abs(eval_numeric(full, m)) < 1e-12 for m in range(1, n))
    h = Idempotent.of(16, (0, 4))
    for m in range(16):
        assert abs(eval_numeric(h, m) - (1 + cmath.exp(2j * cmath.pi * m / 4)) / 16) < 1e-12
    single = Idempotent.of(9, (5,))
    assert all(abs(abs(eval_numeric(single, m)) - 1 / 9) < 1e-12 for m in range(9))


def test_zero_set_divisor_examples():
    assert zero_set_divisors(Idempotent.of(16, (0, 4))).divisors == (2,)
    assert zero_set_divisors(Idempotent.of(16, (0, 1, 4, 5))).divisors == (2, 8)
    assert zero_set_divisors(Idempotent(IndexSet.full(12))).divisors == divisors_proper(12)


def test_zero_set_examples():
    assert zero_set(Idempotent.of(16, (0, 4))).elements == (2, 6, 10, 14)
    assert zero_set(Idempotent.of(16, (3,))).elements == ()
    assert zero_set(Idempotent.of(16, (0, 1, 2, 3))).elements == (4, 8, 12)


def test_cyclotomic_examples():
    assert cyclotomic(4).coefficients == (1, 0, 1)
    assert cyclotomic(8).coefficients == (1, 0, 0, 0, 1)
    for p in (2, 3, 5, 7, 11):
        assert cyclotomic(p).coefficients == (1,) * p
    assert cyclotomic(1).coefficients == (-1, 1)


@pytest.mark.parametrize("s", range(1, 106))
def test_cyclotomic_roots_are_primitive_roots(s):
    poly = cyclotomic(s)
    assert poly.degree == totient(s)
    assert poly.coefficients[-1] == 1
    coeffs = np.array(poly.coefficients[::-1], dtype=complex)
    for l in range(s):
        if gcd(l, s) == 1:
            assert abs(np.polyval(coeffs, cmath.exp(2j * cmath.pi * l / s))) < 1e-6


def test_cyclotomic_product_is_xs_minus_one():
    for s in (12, 30, 36):
        prod = IntPolynomial((1,))
        for d in range(1, s + 1):
            if s % d == 0:
                prod = prod * cyclotomic(d)
        assert prod.coefficients == (-1,) + (0,) * (s - 1) + (1,)


def test_polynomial_divmod():
    a = IntPolynomial((1, 2, 3, 4, 5))
    b = IntPolynomial((1, 0, 1))
    q, r = a.divmod(b)
    back = q * b
    padded = list(back.coefficients) + [0] * 5
    for i, c in enumerate(r.coefficients):
        padded[i] += c
    assert IntPolynomial(tuple(padded)) == a
    with pytest.raises(ValueError):
        a.divmod(IntPolynomial((1, 2)))


@pytest.mark.parametrize("q, k, expected", [(4, 1, 0), (4, 2, -2), (4, 4, 2)])
def test_ramanujan_examples(q, k, expected):
    assert ramanujan_sum(q, k) == expected


@pytest.mark.parametrize("p, s", [(2, 1), (2, 3), (3, 2), (5, 2), (7, 1)])
def test_ramanujan_prime_power_property(p, s):
    q = p**s
    for n in range(0, 3 * q):
        value = ramanujan_sum(q, n)
        if n % q == 0:
            assert value == q - q // p
        elif n % (q // p) == 0:
            assert value == -(q // p)
        else:
            assert value == 0


@settings(max_examples=200)
@given(st.integers(1, 120), st.integers(0, 300))
def test_ramanujan_matches_direct_sum(q, k):
    direct = sum(cmath.exp(2j * cmath.pi * n * k / q) for n in range(1, q + 1) if gcd(n, q) == 1)
    assert abs(direct.imag) < 1e-6
    assert ramanujan_sum(q, k) == round(direct.real)


@settings(max_examples=150, deadline=None)
@given(subsets([12, 16, 18, 20, 24, 27, 30, 36, 64]))
def test_exact_and_numeric_zero_sets_agree(j):
    assert zero_set(Idempotent(j)) == numeric_zero_set(j)


@settings(max_examples=100, deadline=None)
@given(subsets([10, 16, 27, 45]))
def test_conjugate_symmetry(j):
    h = Idempotent(j)
    for m in range(1, j.n):
        assert abs(eval_numeric(h, j.n - m) - eval_numeric(h, m).conjugate()) < 1e-12


@settings(max_examples=150, deadline=None)
@given(subsets([4, 8, 9, 16, 25, 27, 32, 49, 81]))
def test_dimension_bound_prime_powers(j):
    p = [q for q in range(2, 10) if j.n % q == 0][0]
    assert p ** len(zero_set_divisors(j)) <= len(j)


@settings(max_examples=100, deadline=None)
@given(subsets([5, 7, 11, 13, 17]))
def test_prime_modulus_zero_sets(j):
    assert is_prime(j.n)
    d = zero_set_divisors(j).divisors
    assert d in ((), (1,))
    assert (d == (1,)) == (len(j) == j.n)


@settings(max_examples=80, deadline=None)
@given(subsets([12, 16, 24, 27]))
def test_batch_masks_match_single_evaluation(j):
    mask = int(divisor_masks(j.n, np.array([j.elements]))[0])
    assert mask_to_divisors(j.n, mask) == zero_set_divisors(j)


def test_prescribe_examples():
    assert prescribe_zero_set(DivisorSet(16, (2,))).elements == (0, 4)
    assert prescribe_zero_set(DivisorSet(16, (2, 8))).elements == (0, 1, 4, 5)
    six = divisors_from_zero_set(IndexSet(6, (2, 3, 4)))
    assert six.divisors == (2, 3)
    assert prescribe_zero_set(six, "exhaustive") is None


def test_prescribe_constructive_rejects_composite():
    with pytest.raises(ValueError):
        prescribe_zero_set(DivisorSet(12, (2,)), "constructive")


@pytest.mark.parametrize("p, m", [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_constructive_prescription_is_exact_and_block_form(p, m):
    n = p**m
    props = divisors_proper(n)
    for r in range(len(props) + 1):
        for combo in itertools.combinations(props, r):
            d = DivisorSet(n, combo)
            j = prescribe_zero_set(d)
            assert zero_set_divisors(j) == d
            assert len(j) == p ** len(d)
            assert is_block_concatenation_form(j, p, m, d.log_columns())


@pytest.mark.parametrize("n", [8, 9, 16])
def test_exhaustive_prescription_agrees_in_size(n):
    props = divisors_proper(n)
    for r in range(len(props) + 1):
        for combo in itertools.combinations(props, r):
            d = DivisorSet(n, combo)
            found = prescribe_zero_set(d, "exhaustive")
            assert zero_set_divisors(found) == d
            assert len(found) == len(prescribe_zero_set(d))


def test_exhaustive_prescription_bound():
    with pytest.raises(SearchBoundExceeded):
        prescribe_zero_set(DivisorSet(30, (1,)), "exhaustive", SearchBounds(prescribe_subsets=2**20))


def test_divisors_from_zero_set_rejects_non_unions():
    with pytest.raises(ValueError):
        divisors_from_zero_set(IndexSet(16, (2, 6)))
    with pytest.raises(ValueError):
        divisors_from_zero_set(IndexSet(16, (0, 8)))


def test_block_concatenation_examples():
    assert is_block_concatenation_form(IndexSet(16, (0, 1, 4, 5)), 2, 4, (1, 3))
    assert not is_block_concatenation_form(IndexSet(8, (0, 1, 5, 6)), 2, 3, (0, 2))
    two_blocks = IndexSet(16, (0, 4, 1, 5))  # {0,4} and its translate by 1, marks L={1}
    assert is_block_concatenation_form(two_blocks, 2, 4, (1,))
    assert not is_block_concatenation_form(IndexSet(16, (0, 4, 8)), 2, 4, (1,))


def test_realizable_divisor_sets():
    six = realizable_divisor_sets(6)
    assert DivisorSet(6, (2, 3)) not in six
    eight = realizable_divisor_sets(8)
    assert len(eight) == 2 ** len(divisors_proper(8))
    twenty = realizable_divisor_sets(20)
    assert DivisorSet(20, (1, 4, 10)) not in twenty
    assert twenty[DivisorSet(20, (4, 5))] == frozenset({10})


def test_idempotent_cache_and_json():
    h = Idempotent.of(16, (0, 1, 4, 5))
    results = []
    threads = [threading.Thread(target=lambda: results.append(h.divisors)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r is results[0] for r in results)
    data = h.to_json()
    assert data == {"n": 16, "elements": [0, 1, 4, 5], "divisors": [2, 8]}
    back = Idempotent.from_json(data)
    assert back == h and back.divisors == h.divisors
    assert abs(eval_numeric(h, 0) - 4 / 16) < 1e-15
