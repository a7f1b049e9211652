"""Tilings of Z_N by translates of an index set, and the sampling/tiling equivalence.

J tiles Z_N with translation set K when every residue is uniquely j + k.
Equivalently |J| |K| = N and the difference sets of J and K meet only in 0,
which is the form the vectorised sweep uses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .config import SearchBounds, resolve
from .errors import SearchBoundExceeded
from .graph import build_graph, max_clique_search
from .idempotent import combination_chunks, divisor_masks, mask_to_divisors, prescribe_zero_set, zero_set_divisors
from .sampling import find_orthogonal_sampling_set
from .zn import IndexSet, Modulus


def tiles(tile: IndexSet, translates: IndexSet) -> bool:
    """Whether the convolution 1_J * 1_K is identically 1."""
    n = tile.n
    if translates.n != n:
        raise ValueError(f"index sets live in different groups: Z_{n} and Z_{translates.n}")
    if len(tile) * len(translates) != n:
        return False
    counts = np.zeros(n, dtype=np.int64)
    shifts = np.asarray(translates.elements, dtype=np.int64)
    for j in tile:
        np.add.at(counts, (j + shifts) % n, 1)
    return bool(np.all(counts == 1))


@dataclass(frozen=True)
class TilingWitness:
    tile: IndexSet
    translates: IndexSet

    def __post_init__(self):
        if not tiles(self.tile, self.translates):
            raise ValueError(f"{list(self.tile)} and {list(self.translates)} do not tile Z_{self.tile.n}")


def _rotations(mask: int, n: int) -> list[int]:
    full = (1 << n) - 1
    return [((mask << k) | (mask >> (n - k))) & full for k in range(n)]


def _exhaustive_complement(tile: IndexSet, bounds: SearchBounds) -> IndexSet | None:
    """Lexicographically first K with 0 in K, or None.

    K is grown in increasing order; a branch is cut as soon as the smallest
    uncovered residue can no longer be reached by any larger translate.
    Any tiling can be translated to contain 0, so 0 in K loses nothing.
    """
    n = tile.n
    size, rem = divmod(n, len(tile))
    if rem:
        return None
    placed = _rotations(tile.mask, n)
    full = (1 << n) - 1
    budget = [bounds.tiling_candidates]
    elements = tile.elements

    def search(chosen: list[int], covered: int) -> list[int] | None:
        if len(chosen) == size:
            return chosen if covered == full else None
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchBoundExceeded(f"tiling search for {list(tile)} exceeded {bounds.tiling_candidates} nodes")
        uncovered = ~covered & full
        lowest = (uncovered & -uncovered).bit_length() - 1
        last = chosen[-1]
        reachable = [k for k in ((lowest - j) % n for j in elements) if k > last and not placed[k] & covered]
        if not reachable:
            return None
        for k in range(last + 1, n):
            if placed[k] & covered:
                continue
            found = search(chosen + [k], covered | placed[k])
            if found is not None:
                return found
        return None

    result = search([0], placed[0])
    return IndexSet(n, tuple(result)) if result is not None else None


def find_tiling_complement(
    tile: IndexSet,
    mode: str = "auto",
    bounds: SearchBounds | None = None,
) -> IndexSet | None:
    """A translation set K with tiles(J, K), or None.

    ``constructive`` (prime-power N) prescribes the complementary zero-set
    divisors and checks the result; ``exhaustive`` searches translate sets;
    ``auto`` picks constructive for prime powers.
    """
    b = resolve(bounds)
    n = tile.n
    if not len(tile):
        raise ValueError("empty tile")
    if mode == "auto":
        mode = "constructive" if Modulus(n).prime_power else "exhaustive"
    if mode == "constructive":
        if Modulus(n).prime_power is None:
            raise ValueError(f"constructive mode needs a prime-power modulus, got {n}")
        candidate = prescribe_zero_set(zero_set_divisors(tile).complement(), "constructive")
        return candidate if tiles(tile, candidate) else None
    if mode == "exhaustive":
        return _exhaustive_complement(tile, b)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class FugledeReport:
    tile: IndexSet
    sampling_set: IndexSet | None
    tiling_complement: IndexSet | None
    in_scope: bool

    @property
    def has_sampling_set(self) -> bool:
        return self.sampling_set is not None

    @property
    def tiles(self) -> bool:
        return self.tiling_complement is not None

    @property
    def agree(self) -> bool:
        return self.has_sampling_set == self.tiles

    def to_json(self) -> dict:
        return {
            "j": list(self.tile.elements),
            "n": self.tile.n,
            "sampling_set": list(self.sampling_set.elements) if self.sampling_set else None,
            "tiling_complement": list(self.tiling_complement.elements) if self.tiling_complement else None,
            "agree": self.agree,
            "in_scope": self.in_scope,
        }


def fuglede_check(tile: IndexSet, bounds: SearchBounds | None = None) -> FugledeReport:
    """Both verdicts, computed independently: sampling side from zero sets, tiling side by exhaustive search.

    ``in_scope`` is False when N is not a prime power, where agreement is
    not guaranteed and is only reported.
    """
    b = resolve(bounds)
    sampling = find_orthogonal_sampling_set(tile, b)
    complement = _exhaustive_complement(tile, b)
    return FugledeReport(tile, sampling, complement, Modulus(tile.n).prime_power is not None)


# --- exhaustive sweep ------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    n: int
    d: int
    subsets: int
    sampling_positive: int
    tiling_positive: int
    disagreements: int
    skipped: bool = False

    def to_json(self) -> dict:
        return self.__dict__.copy()


def _difference_bitsets(subsets: np.ndarray, n: int) -> np.ndarray:
    """For each row, the bitset of residues j - j' over pairs of its elements (0 included)."""
    diffs = (subsets[:, :, None] - subsets[:, None, :]) % n
    return np.bitwise_or.reduce(np.left_shift(np.int64(1), diffs).reshape(len(subsets), -1), axis=1)


def _has_clique_through_zero(connection: int, n: int, target: int) -> bool:
    """Whether the circulant graph with this connection set has a clique of the given size."""
    if target <= 1:
        return True
    full = (1 << n) - 1
    adjacency = [((connection << i) | (connection >> (n - i))) & full for i in range(n)]

    def grow(size: int, candidates: int) -> bool:
        if size == target:
            return True
        if bin(candidates).count("1") < target - size:
            return False
        while candidates:
            v = (candidates & -candidates).bit_length() - 1
            candidates &= candidates - 1
            if grow(size + 1, candidates & adjacency[v]):
                return True
        return False

    return grow(1, adjacency[0])


def fuglede_sweep(
    moduli: Iterable[int],
    max_subsets: int | None = None,
    bounds: SearchBounds | None = None,
) -> list[SweepRow]:
    """Check sampling-set existence against tiling for every subset of every size up to N/2.

    Sampling side: exact zero-set divisors D(h_J) of each J, then a clique
    search in the difference graph of D (one search per distinct D).
    Tiling side: J tiles iff some K of size N/|J| has differences avoiding
    those of J, a clique search in the circulant graph on the complement of
    J - J (one search per distinct difference set).  Sizes with more than
    ``max_subsets`` subsets (default: the configured sweep bound) are
    reported as skipped rather than searched.
    """
    b = resolve(bounds)
    if max_subsets is None:
        max_subsets = b.sweep_subsets
    rows = []
    for n in moduli:
        full = (1 << n) - 1
        for d in range(1, n // 2 + 1):
            total = math.comb(n, d)
            if total > max_subsets:
                rows.append(SweepRow(n, d, total, 0, 0, 0, skipped=True))
                continue
            clique_by_mask: dict[int, int] = {}
            tiles_by_diff: dict[int, bool] = {}
            sampling_pos = tiling_pos = disagree = 0
            for chunk in combination_chunks(n, d):
                masks = divisor_masks(n, chunk)
                has_sampling = np.zeros(len(chunk), dtype=bool)
                for mask in np.unique(masks).tolist():
                    if mask not in clique_by_mask:
                        clique_by_mask[mask] = len(max_clique_search(build_graph(mask_to_divisors(n, mask)), b))
                    if clique_by_mask[mask] >= d:
                        has_sampling |= masks == mask
                has_tiling = np.zeros(len(chunk), dtype=bool)
                if n % d == 0:
                    diff_sets = _difference_bitsets(chunk, n)
                    uniq, inverse = np.unique(diff_sets, return_inverse=True)
                    verdicts = np.zeros(len(uniq), dtype=bool)
                    for idx, diff in enumerate(uniq.tolist()):
                        if diff not in tiles_by_diff:
                            tiles_by_diff[diff] = _has_clique_through_zero(full & ~diff, n, n // d)
                        verdicts[idx] = tiles_by_diff[diff]
                    has_tiling = verdicts[inverse.reshape(-1)]
                sampling_pos += int(has_sampling.sum())
                tiling_pos += int(has_tiling.sum())
                disagree += int(np.count_nonzero(has_sampling != has_tiling))
            rows.append(SweepRow(n, d, total, sampling_pos, tiling_pos, disagree))
    return rows
