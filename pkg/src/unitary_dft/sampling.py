"""Orthogonal sampling sets, unitary pairs and interpolating bases.

The inverse DFT carries the 1/N factor, so the submatrix for a unitary pair
(I, J) satisfies S S* = (|J| / N^2) Id.  Exact decisions go through zero-set
divisors; the floating-point routines only reproduce and cross-check them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .config import SearchBounds
from .digit_table import canonical_valid_table, dual_markings
from .errors import SingularSubmatrixError
from .graph import build_graph, max_clique_search
from .idempotent import eval_all, zero_set_divisors
from .zn import IndexSet, Modulus

NUMERIC_TOL = 1e-9


def _same_modulus(a: IndexSet, b: IndexSet) -> int:
    if a.n != b.n:
        raise ValueError(f"index sets live in different groups: Z_{a.n} and Z_{b.n}")
    return a.n


def fourier_matrix(rows: Sequence[int], cols: Sequence[int], n: int) -> np.ndarray:
    """Entries (1/N) exp(2 pi i a b / N); phases reduced mod N before scaling to keep them accurate."""
    a = np.asarray(rows, dtype=np.int64)[:, None]
    b = np.asarray(cols, dtype=np.int64)[None, :]
    return np.exp(2j * np.pi * ((a * b) % n) / n) / n


@dataclass(frozen=True)
class FourierSubmatrix:
    rows: IndexSet
    cols: IndexSet

    def __post_init__(self):
        _same_modulus(self.rows, self.cols)

    @property
    def n(self) -> int:
        return self.rows.n

    @property
    def entries(self) -> np.ndarray:
        return fourier_matrix(self.rows.elements, self.cols.elements, self.n)

    def entries_in_order(self, row_order: Sequence[int], col_order: Sequence[int]) -> np.ndarray:
        """The same submatrix with rows and columns listed in a chosen order."""
        if sorted(row_order) != list(self.rows.elements) or sorted(col_order) != list(self.cols.elements):
            raise ValueError("orders must be permutations of the row and column sets")
        return fourier_matrix(row_order, col_order, self.n)


def differences(index_set: IndexSet) -> set[int]:
    n = index_set.n
    return {(a - b) % n for a, b in itertools.permutations(index_set.elements, 2)}


def is_orthogonal_sampling_set(sample_set: IndexSet, frequencies: IndexSet) -> bool:
    """Exact test: equal sizes and every nonzero difference of I lies in the zero set of h_J."""
    n = _same_modulus(sample_set, frequencies)
    if len(sample_set) != len(frequencies) or not len(frequencies):
        return False
    zero_divisors = set(zero_set_divisors(frequencies).divisors)
    return all(gcd(t, n) in zero_divisors for t in differences(sample_set))


def is_unitary_pair(rows: IndexSet, cols: IndexSet) -> bool:
    return is_orthogonal_sampling_set(rows, cols)


def find_orthogonal_sampling_set(frequencies: IndexSet, bounds: SearchBounds | None = None) -> IndexSet | None:
    """The canonical orthogonal sampling set for B^J, or None when none exists.

    For N = p^M a sampling set exists exactly when |J| = p^{|D(h)|}, and the
    canonical digit-table over log D(h) is one.  Otherwise a maximum clique
    of the difference graph of D(h) is a sampling set when its size is |J|.
    """
    n = frequencies.n
    divisors = zero_set_divisors(frequencies)
    pm = Modulus(n).prime_power
    if pm is not None:
        p, m = pm
        if len(frequencies) != p ** len(divisors):
            return None
        return canonical_valid_table(p, m, divisors.log_columns()).index_set()
    clique = max_clique_search(build_graph(divisors), bounds)
    return clique if len(clique) == len(frequencies) else None


def make_unitary_pair(p: int, m: int, marked: Iterable[int]) -> tuple[IndexSet, IndexSet]:
    """Rows from the canonical table on ``marked``, columns from the canonical table on the dual marks."""
    marked = tuple(marked)
    rows = canonical_valid_table(p, m, marked).index_set()
    cols = canonical_valid_table(p, m, dual_markings(marked, m)).index_set()
    return rows, cols


@dataclass(frozen=True)
class GramCheck:
    offdiag_max: float
    diag_error: float
    expected_diag: float

    @property
    def unitary(self) -> bool:
        return self.offdiag_max < NUMERIC_TOL * self.expected_diag and self.diag_error < NUMERIC_TOL


def gram_check(rows: IndexSet, cols: IndexSet) -> GramCheck:
    """Numeric check that S S* = (|J| / N^2) Id."""
    n = _same_modulus(rows, cols)
    s = FourierSubmatrix(rows, cols).entries
    gram = s @ s.conj().T
    expected = len(cols) / n**2
    off = gram - np.diag(np.diag(gram))
    offdiag = float(np.abs(off).max()) if off.size else 0.0
    diag_error = float(np.abs(np.diag(gram) - expected).max()) if gram.size else 0.0
    return GramCheck(offdiag, diag_error, expected)


@dataclass(frozen=True)
class InterpolatingBasis:
    sample_set: IndexSet
    frequencies: IndexSet
    vectors: np.ndarray  # row k is the basis vector for the k-th sample point
    condition: float

    def squared_norms(self) -> np.ndarray:
        return np.sum(np.abs(self.vectors) ** 2, axis=1)


def _checked_submatrix(sample_set: IndexSet, frequencies: IndexSet) -> tuple[np.ndarray, float]:
    _same_modulus(sample_set, frequencies)
    if len(sample_set) != len(frequencies):
        raise SingularSubmatrixError(
            f"submatrix for I={list(sample_set)} J={list(frequencies)} is not square"
        )
    s = FourierSubmatrix(sample_set, frequencies).entries
    singular_values = np.linalg.svd(s, compute_uv=False)
    if singular_values[-1] <= 1e-12 * singular_values[0]:
        raise SingularSubmatrixError(
            f"submatrix for I={list(sample_set)} J={list(frequencies)} is singular"
        )
    return s, float(singular_values[0] / singular_values[-1])


def interpolating_basis(sample_set: IndexSet, frequencies: IndexSet) -> InterpolatingBasis:
    """u_i = F^{-1} E_J S^{-1} e_i, the basis of B^J with u_i(i') = delta_{i i'} on I."""
    n = sample_set.n
    s, cond = _checked_submatrix(sample_set, frequencies)
    synthesis = fourier_matrix(range(n), frequencies.elements, n)
    vectors = np.linalg.solve(s.T, synthesis.T)
    return InterpolatingBasis(sample_set, frequencies, vectors, cond)


def shifted_idempotent_basis(sample_set: IndexSet, frequencies: IndexSet) -> np.ndarray:
    """Rows h(n - i) / h(0) for i in I; the interpolating basis of an orthogonal pair."""
    n = _same_modulus(sample_set, frequencies)
    h = eval_all(frequencies)
    idx = (np.arange(n)[None, :] - np.asarray(sample_set.elements)[:, None]) % n
    return h[idx] / h[0]


def reconstruct(samples: Sequence[complex], sample_set: IndexSet, frequencies: IndexSet) -> np.ndarray:
    """The unique f in B^J taking the given values on I."""
    samples = np.asarray(samples, dtype=complex)
    if samples.shape != (len(sample_set),):
        raise ValueError(f"expected {len(sample_set)} samples, got shape {samples.shape}")
    basis = interpolating_basis(sample_set, frequencies)
    return samples @ basis.vectors


def random_bandlimited(frequencies: IndexSet, rng: np.random.Generator) -> np.ndarray:
    """A signal whose spectrum is random complex Gaussian on J and zero elsewhere."""
    n = frequencies.n
    spectrum = np.zeros(n, dtype=complex)
    k = len(frequencies)
    spectrum[list(frequencies.elements)] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return np.fft.ifft(spectrum)


@dataclass(frozen=True)
class PairReport:
    rows: IndexSet
    cols: IndexSet
    unitary: bool
    gram_offdiag_max: float
    witness_basis_norm: float | None

    def to_json(self) -> dict:
        return {
            "i": list(self.rows.elements),
            "j": list(self.cols.elements),
            "n": self.rows.n,
            "unitary": self.unitary,
            "gram_offdiag_max": self.gram_offdiag_max,
            "witness_basis_norm": self.witness_basis_norm,
        }


def pair_report(rows: IndexSet, cols: IndexSet) -> PairReport:
    """Exact verdict plus numeric Gram residual and the largest squared basis-vector length."""
    unitary = is_unitary_pair(rows, cols)
    gram = gram_check(rows, cols)
    try:
        norm = float(interpolating_basis(rows, cols).squared_norms().max())
    except SingularSubmatrixError:
        norm = None
    return PairReport(rows, cols, unitary, gram.offdiag_max, norm)


# --- closed-form families ------------------------------------------------------


@dataclass(frozen=True)
class ConsecutiveFamily:
    n: int
    d: int
    offset: int
    frequencies: IndexSet
    zeros: IndexSet
    sampling_set: IndexSet | None

    def closed_form(self, m: int) -> complex:
        """(1/N) e^{2 pi i m c / N} sin(pi m d / N) / sin(pi m / N), with c the centre of the run."""
        m %= self.n
        if m == 0:
            return complex(self.d / self.n)
        centre = self.offset + (self.d - 1) / 2
        phase = np.exp(2j * np.pi * m * centre / self.n)
        return complex(phase * np.sin(np.pi * m * self.d / self.n) / np.sin(np.pi * m / self.n) / self.n)


def consecutive_family(n: int, d: int, offset: int = 0) -> ConsecutiveFamily:
    """J = {offset, ..., offset + d - 1} mod N; sampling set exists iff d divides N."""
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= N, got d={d}, N={n}")
    frequencies = IndexSet.reduce(n, range(offset, offset + d))
    step = n // gcd(d, n)
    zeros = IndexSet(n, tuple(range(step, n, step)))
    sampling = IndexSet(n, (0,) + zeros.elements) if n % d == 0 else None
    return ConsecutiveFamily(n, d, offset % n, frequencies, zeros, sampling)


@dataclass(frozen=True)
class ProgressionFamily:
    n: int
    step: int
    d: int
    offset: int
    frequencies: IndexSet
    ordered: tuple[int, ...]
    zeros: IndexSet
    sampling_set: IndexSet | None


def progression_family(n: int, step: int, d: int, offset: int = 0) -> ProgressionFamily:
    """J = {offset + k step mod N : 0 <= k < d}.

    h_J(m) vanishes exactly when N divides m step d but not m step, so the
    zero set is the multiples of N / gcd(N, step d) minus the multiples of
    N / s0, s0 = gcd(step, N).  J lives in a coset of the subgroup of order
    N / s0, on which multiplication by step / s0 is invertible; a sampling
    set exists iff d divides N / s0, namely (N / (s0 d)) {0, ..., d - 1}.
    """
    if d < 1:
        raise ValueError("d must be positive")
    ordered = tuple((offset + k * step) % n for k in range(d))
    if len(set(ordered)) != d:
        raise ValueError(f"progression offset={offset}, step={step}, d={d} repeats elements mod {n}")
    s0 = gcd(step, n)
    outer = n // gcd(n, step * d)
    inner = n // s0
    zeros = IndexSet(n, tuple(m for m in range(outer, n, outer) if m % inner))
    sub = n // s0
    sampling = IndexSet(n, tuple(k * (sub // d) for k in range(d))) if sub % d == 0 else None
    return ProgressionFamily(n, step, d, offset % n, IndexSet(n, ordered), ordered, zeros, sampling)

