"""Acceptance criteria 1-7 at their stated tolerances and time limits.

Each test carries ``acceptance(n)``; conftest prints one PASS/FAIL line per
criterion at the end of the run.
"""
import cmath
import itertools
import math
import time

import numpy as np
import pytest

from unitary_dft.counting import (
    brute_force_count_sampling_sets,
    brute_force_count_unitary_pairs,
    count_sampling_sets,
    count_unitary_pairs,
    theta_phi_table,
)
from unitary_dft.digit_table import build_table, decompose, enumerate_valid, recompose, valid_table_count
from unitary_dft.graph import build_graph, find_odd_hole, is_hole, max_clique
from unitary_dft.idempotent import (
    divisors_from_zero_set,
    numeric_zero_set,
    prescribe_zero_set,
    ramanujan_sum,
    zero_set,
    zero_set_divisors,
)
from unitary_dft.sampling import (
    FourierSubmatrix,
    consecutive_family,
    find_orthogonal_sampling_set,
    gram_check,
    is_unitary_pair,
    progression_family,
    random_bandlimited,
    reconstruct,
)
from unitary_dft.tiling import find_tiling_complement, fuglede_check, fuglede_sweep
from unitary_dft.zn import DivisorSet, IndexSet, Modulus, divisors_proper


# --- 1: closed-form counts ----------------------------------------------------------


@pytest.mark.acceptance(1)
def test_criterion_1_closed_form_counts():
    start = time.perf_counter()
    assert count_sampling_sets(2, 3, 2) == 22
    assert count_sampling_sets(2, 4, 2) == 380
    assert count_unitary_pairs(2, 3, 2) == 80
    assert count_unitary_pairs(2, 4, 2) == 4352
    assert time.perf_counter() - start < 1


# --- 2: brute-force oracles -----------------------------------------------------------


@pytest.mark.acceptance(2)
def test_criterion_2_brute_force_oracles():
    start = time.perf_counter()
    assert math.comb(8, 4) == 70 and math.comb(16, 4) == 1820
    assert brute_force_count_sampling_sets(8, 4) == 22
    assert brute_force_count_sampling_sets(16, 4) == 380
    assert math.comb(8, 4) ** 2 == 4900 and math.comb(16, 4) ** 2 == 3_312_400
    assert brute_force_count_unitary_pairs(8, 4) == 80
    assert brute_force_count_unitary_pairs(16, 4) == 4352
    assert time.perf_counter() - start < 120


# --- 3: worked example ------------------------------------------------------------------


@pytest.mark.acceptance(3)
def test_criterion_3_worked_example():
    rows, cols = IndexSet(16, (0, 2, 8, 10)), IndexSet(16, (0, 1, 4, 5))
    assert is_unitary_pair(rows, cols)
    assert gram_check(rows, cols).unitary
    w8 = cmath.exp(2j * cmath.pi / 8)
    displayed = np.array([[1, 1, 1, 1], [1, w8, -1, -w8], [1, -1, 1, -1], [1, -w8, -1, w8]]) / 16
    rendered = FourierSubmatrix(rows, cols).entries_in_order((0, 2, 8, 10), (0, 1, 4, 5))
    assert np.abs(rendered - displayed).max() <= 1e-12


# --- 4: negative cases ------------------------------------------------------------------


@pytest.mark.acceptance(4)
def test_criterion_4_negative_cases():
    j = IndexSet(8, (0, 1, 5, 6))
    assert find_orthogonal_sampling_set(j) is None
    assert find_tiling_complement(j, "exhaustive") is None
    report = fuglede_check(j)
    assert (report.has_sampling_set, report.tiles) == (False, False) and report.agree
    divisors = divisors_from_zero_set(IndexSet(6, (2, 3, 4)))
    assert divisors == DivisorSet(6, (2, 3))
    assert prescribe_zero_set(divisors, "exhaustive") is None


# --- 5: sampling/tiling sweep -----------------------------------------------------------


@pytest.mark.acceptance(5)
def test_criterion_5_fuglede_sweep(acceptance_note):
    start = time.perf_counter()
    rows = fuglede_sweep([8, 9, 16, 27])
    elapsed = time.perf_counter() - start
    by_key = {(r.n, r.d): r for r in rows}
    assert {(n, d) for n in (8, 9, 16, 27) for d in range(1, n // 2 + 1)} == set(by_key)
    skipped = [(r.n, r.d) for r in rows if r.skipped]
    if skipped:
        acceptance_note(f"sizes beyond the sweep bound: {skipped}")
    for r in rows:
        if not r.skipped:
            assert r.disagreements == 0, r
            assert r.sampling_positive == r.tiling_positive
    assert by_key[(16, 4)].sampling_positive == 380
    assert by_key[(8, 4)].sampling_positive == 22
    acceptance_note(f"{elapsed:.0f} s")
    assert elapsed < 600


# --- 6: graph results -------------------------------------------------------------------


@pytest.mark.acceptance(6)
def test_criterion_6_clique_and_hole_examples():
    assert len(max_clique(build_graph(DivisorSet(20, (1, 4, 10))))) == 6
    g72 = build_graph(DivisorSet(72, (1, 3, 4, 12)))
    hole = find_odd_hole(g72, vertices=(1, 4, 3, 31, 12))
    assert hole is not None and set(hole) == {1, 4, 3, 31, 12}
    assert is_hole(g72, hole)


def _prime_power_or_semiprime(n):
    factors = Modulus(n).factorization
    return len(factors) == 1 or (len(factors) == 2 and all(e == 1 for _, e in factors))


@pytest.mark.acceptance(6)
def test_criterion_6_no_holes_for_prime_powers_and_semiprimes():
    start = time.perf_counter()
    moduli = [n for n in range(2, 31) if _prime_power_or_semiprime(n)]
    checked = 0
    for n in moduli:
        props = divisors_proper(n)
        for r in range(len(props) + 1):
            for combo in itertools.combinations(props, r):
                g = build_graph(DivisorSet(n, combo))
                assert find_odd_hole(g, False, 13) is None, (n, combo)
                assert find_odd_hole(g, True, 13) is None, (n, combo, "complement")
                checked += 1
    assert checked > 0
    assert time.perf_counter() - start < 300


# --- 7: property suites -----------------------------------------------------------------


@pytest.mark.acceptance(7)
def test_criterion_7a_exact_and_numeric_zero_sets_agree():
    rng = np.random.default_rng(2024)
    moduli = (12, 16, 18, 24, 27)
    for trial in range(500):
        n = moduli[trial % len(moduli)]
        size = int(rng.integers(1, n + 1))
        j = IndexSet(n, tuple(rng.choice(n, size=size, replace=False).tolist()))
        assert zero_set(j) == numeric_zero_set(j, 1e-9), j


def _prime_power_sets():
    for n in (2, 4, 8, 16, 3, 9, 5):
        for d in range(1, n + 1):
            for combo in itertools.combinations(range(n), d):
                yield IndexSet(n, combo)
    rng = np.random.default_rng(7)
    for n in (25, 27, 32, 49, 64, 81):
        for _ in range(200):
            size = int(rng.integers(1, n + 1))
            yield IndexSet(n, tuple(rng.choice(n, size=size, replace=False).tolist()))


@pytest.mark.acceptance(7)
def test_criterion_7b_dimension_bound():
    tested = 0
    for j in _prime_power_sets():
        p, _ = Modulus(j.n).prime_power
        assert p ** len(zero_set_divisors(j)) <= len(j), j
        tested += 1
    assert tested > 60000


def _families():
    yield IndexSet(16, (0, 2, 8, 10)), IndexSet(16, (0, 1, 4, 5))
    for n, d, offset in ((16, 4, 0), (24, 6, 5), (27, 9, 2), (30, 5, 11)):
        fam = consecutive_family(n, d, offset)
        yield fam.sampling_set, fam.frequencies
    for n, s, d, offset in ((16, 6, 4, 0), (24, 9, 4, 3), (36, 10, 6, 1)):
        fam = progression_family(n, s, d, offset)
        yield fam.sampling_set, fam.frequencies


@pytest.mark.acceptance(7)
def test_criterion_7c_reconstruction_round_trip():
    rng = np.random.default_rng(11)
    for rows, cols in _families():
        assert rows is not None and is_unitary_pair(rows, cols)
        for _ in range(100):
            f = random_bandlimited(cols, rng)
            recovered = reconstruct(f[list(rows.elements)], rows, cols)
            assert np.abs(recovered - f).max() < 1e-9


@pytest.mark.acceptance(7)
def test_criterion_7d_ramanujan_sums():
    for q in range(1, 513):
        units = np.array([a for a in range(1, q + 1) if math.gcd(a, q) == 1])
        ks = np.arange(2 * q)
        direct = np.exp(2j * np.pi * np.outer(ks, units) / q).sum(axis=1)
        closed = np.array([ramanujan_sum(q, int(k)) for k in ks])
        assert np.abs(direct - closed).max() < 1e-6 * max(1, len(units)), q


def _difference_valuation_mask(sets, p):
    """Bitmask over p-adic valuations of all pairwise differences, one per row."""
    arr = np.asarray(sets, dtype=np.int64)
    diffs = np.abs(arr[:, :, None] - arr[:, None, :]).reshape(len(arr), -1)
    val = np.zeros_like(diffs)
    rest = diffs.copy()
    nonzero = rest != 0
    while nonzero.any():
        divisible = nonzero & (rest % p == 0)
        if not divisible.any():
            break
        val += divisible
        rest = np.where(divisible, rest // p, rest)
        nonzero = divisible
    bits = np.where(diffs != 0, np.left_shift(1, val), 0)
    return np.bitwise_or.reduce(bits, axis=1)


@pytest.mark.acceptance(7)
def test_criterion_7e_digit_tables(acceptance_note):
    enumerated, out_of_reach = 0, []
    for p in (2, 3):
        for m in range(1, 5):
            for r in range(m + 1):
                for marked in itertools.combinations(range(m), r):
                    expected = valid_table_count(p, m, marked)
                    if expected > 10**6:
                        out_of_reach.append((p, m, marked, expected))
                        continue
                    sets = [s.elements for s in enumerate_valid(p, m, marked)]
                    assert len(sets) == expected == len(set(sets))
                    # independent validity: difference valuations are exactly the marked columns
                    want = sum(1 << c for c in marked)
                    assert np.all(_difference_valuation_mask(sets, p) == want)
                    if marked:
                        for elements in sets[:2000]:
                            table = build_table(IndexSet(p**m, elements), p, m, marked)
                            constant, blocks = decompose(table)
                            assert recompose(constant, blocks, marked[0]) == table
                    enumerated += 1
    # 2 + 4 + 8 + 16 markings for each prime
    assert enumerated + len(out_of_reach) == 60
    if out_of_reach:
        acceptance_note(
            "not enumerated (count above 10^6): "
            + ", ".join(f"p={p} M={m} L={set(mk)} count={c}" for p, m, mk, c in out_of_reach)
        )


@pytest.mark.acceptance(7)
def test_criterion_7f_progression_example():
    fam = progression_family(16, 6, 4)
    assert fam.ordered == (0, 6, 12, 2)
    assert fam.sampling_set == IndexSet(16, (0, 2, 4, 6))
    assert is_unitary_pair(fam.sampling_set, fam.frequencies)
    assert gram_check(fam.sampling_set, fam.frequencies).unitary


# --- figures: theta below its bound ------------------------------------------------------


@pytest.mark.acceptance("figures (theta bound)")
def test_theta_below_bound_everywhere():
    for p, top in ((2, 16), (3, 10), (5, 7)):
        for m in range(1, top + 1):
            for row in theta_phi_table(p, m):
                assert row.theta <= row.theta_bound, (p, m, row)
