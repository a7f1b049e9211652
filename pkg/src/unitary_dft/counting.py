"""Counting orthogonal sampling sets and unitary pairs in Z_{p^M}.

Valid digit-tables with marked columns L number p^{lambda(r)}, where r is the
gap vector of L and lambda(r) = sum r_i p^i.  Summing over all gap vectors
with the right total gives the generating-function coefficients; the brute
force oracles below recount the same quantities directly from zero sets.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence, TextIO

import numpy as np

from .config import SearchBounds, resolve
from .idempotent import combination_chunks, divisor_masks
from .zn import divisors_proper


@dataclass(frozen=True)
class GapVector:
    """Counts of unmarked columns before, between and after the marked columns."""

    r: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.r)

    def weight(self, p: int) -> int:
        """lambda(r) = sum r_i p^i."""
        return sum(ri * p**i for i, ri in enumerate(self.r))

    def pair_weight(self, p: int) -> int:
        """sum r_i (p^i + d / p^i) with d = p^{len(r) - 1}."""
        log_d = len(self.r) - 1
        return sum(ri * (p**i + p ** (log_d - i)) for i, ri in enumerate(self.r))

    def marked_columns(self) -> tuple[int, ...]:
        cols, pos = [], 0
        for ri in self.r[:-1]:
            pos += ri
            cols.append(pos)
            pos += 1
        return tuple(cols)


def gap_vectors(m: int, log_d: int) -> Iterator[GapVector]:
    """All compositions of M - log d into log d + 1 nonnegative parts."""
    if not 0 <= log_d <= m:
        raise ValueError(f"need 0 <= log_d <= M, got log_d={log_d}, M={m}")
    total = m - log_d
    parts = log_d + 1
    # stars and bars: choose positions of the parts - 1 separators
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        edges = (-1,) + bars + (total + parts - 1,)
        yield GapVector(tuple(edges[i + 1] - edges[i] - 1 for i in range(parts)))


def count_sampling_sets(p: int, m: int, log_d: int) -> int:
    """Number of size-p^{log d} subsets of Z_{p^M} that are orthogonal sampling sets for some J."""
    return sum(p ** g.weight(p) for g in gap_vectors(m, log_d))


def count_unitary_pairs(p: int, m: int, log_d: int) -> int:
    """Number of ordered pairs (I, J) of size p^{log d} giving a unitary submatrix."""
    return sum(p ** g.pair_weight(p) for g in gap_vectors(m, log_d))


def series_coefficient(ratios: Sequence[int], order: int) -> int:
    """Coefficient of x^order in prod 1/(1 - a x), by truncated power-series products."""
    series = [1] + [0] * order
    for a in ratios:
        geometric = [a**k for k in range(order + 1)]
        series = [sum(series[i] * geometric[k - i] for i in range(k + 1)) for k in range(order + 1)]
    return series[order]


def count_sampling_sets_series(p: int, m: int, log_d: int) -> int:
    return series_coefficient([p ** (p**i) for i in range(log_d + 1)], m - log_d)


def count_unitary_pairs_series(p: int, m: int, log_d: int) -> int:
    d = p**log_d
    return series_coefficient([p ** (p**i + d // p**i) for i in range(log_d + 1)], m - log_d)


# --- brute-force oracles -------------------------------------------------------


def _class_bits(n: int) -> np.ndarray:
    """bits[t] has the bit of gcd(t, N) among the proper divisors; bits[0] = 0."""
    props = divisors_proper(n)
    bits = np.zeros(n, dtype=np.int64)
    for t in range(1, n):
        bits[t] = 1 << props.index(math.gcd(t, n))
    return bits


def difference_masks(n: int, subsets: np.ndarray) -> np.ndarray:
    """OR of the gcd-class bits of all pairwise differences, one mask per row."""
    subsets = np.asarray(subsets, dtype=np.int64)
    diffs = (subsets[:, :, None] - subsets[:, None, :]) % n
    return np.bitwise_or.reduce(_class_bits(n)[diffs].reshape(len(subsets), -1), axis=1)


def _all_masks(n: int, d: int, kind: str) -> np.ndarray:
    chunks = [difference_masks(n, c) if kind == "diff" else divisor_masks(n, c) for c in combination_chunks(n, d)]
    return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)


def brute_force_count_sampling_sets(n: int, d: int, bounds: SearchBounds | None = None) -> int:
    """Count d-subsets I of Z_N that are orthogonal sampling sets for some d-subset J.

    I qualifies iff all its difference classes lie in D(h_J) for some J of
    the same size; the zero-set divisors of every J are computed exactly.
    """
    resolve(bounds).check("count_subsets", math.comb(n, d), "subset count")
    if d > n:
        return 0
    realized = np.unique(_all_masks(n, d, "zero"))
    diff = _all_masks(n, d, "diff")
    covered = np.zeros(len(diff), dtype=bool)
    for mask in realized:
        covered |= (diff & ~mask) == 0
    return int(covered.sum())


def brute_force_count_unitary_pairs(n: int, d: int, bounds: SearchBounds | None = None, chunk: int = 512) -> int:
    """Count ordered pairs (I, J) of d-subsets with every difference of I in the zero set of h_J."""
    resolve(bounds).check("count_pairs", math.comb(n, d) ** 2, "pair count")
    if d > n:
        return 0
    diff = _all_masks(n, d, "diff")
    zero = _all_masks(n, d, "zero")
    total = 0
    for start in range(0, len(diff), chunk):
        block = diff[start : start + chunk, None]
        total += int(np.count_nonzero((block & ~zero[None, :]) == 0))
    return total


# --- theta / phi tables --------------------------------------------------------

CSV_COLUMNS = ("log_d", "count", "theta", "phi_count", "phi", "theta_bound", "phi_bound")


@dataclass(frozen=True)
class ThetaPhiRow:
    log_d: int
    count: int
    theta: float
    phi_count: int
    phi: float
    theta_bound: float
    phi_bound: float


def theta_phi_table(p: int, m: int) -> list[ThetaPhiRow]:
    """theta = log_p(#sampling sets) / d and phi = log_p(#unitary pairs) / d for each size d = p^{log d}.

    The bound columns are M - log d + log_p C(M, floor(M/2)) for theta and
    twice M - log d plus the same binomial term for phi.
    """
    binomial = math.log(math.comb(m, m // 2), p)
    rows = []
    for log_d in range(m + 1):
        d = p**log_d
        count = count_sampling_sets(p, m, log_d)
        pairs = count_unitary_pairs(p, m, log_d)
        rows.append(
            ThetaPhiRow(
                log_d,
                count,
                math.log(count, p) / d,
                pairs,
                math.log(pairs, p) / d,
                m - log_d + binomial,
                2 * (m - log_d) + binomial,
            )
        )
    return rows


def _fmt(x) -> str:
    return str(x) if isinstance(x, int) else format(x, ".15g")


def write_theta_phi_csv(rows: Sequence[ThetaPhiRow], out: TextIO | None = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    text = buffer.getvalue()
    if out is not None:
        out.write(text)
    return text
