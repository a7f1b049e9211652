"""Idempotents h = F^{-1} 1_J on Z_N and their zero sets.

Zero detection is exact.  h_J vanishes on the gcd class of k exactly when
the cyclotomic polynomial Phi_{N/k} divides the indicator polynomial
p_J(x) = sum_{j in J} x^j, which we test by integer polynomial division.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Sequence

import numpy as np

from .config import SearchBounds, resolve
from .digit_table import dual_markings, p_adic_valuation
from .zn import DivisorSet, IndexSet, Modulus, ModulusLike, divisors_proper, factorize, modulus_value


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, constant term first, trailing zeros trimmed."""

    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(a) for a in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coefficients):
            acc = acc * x + a
        return acc

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    def divmod(self, divisor: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Exact division by a monic integer polynomial."""
        d = divisor.coefficients
        if not d or d[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coefficients)
        k = len(d) - 1
        if len(rem) <= k:
            return IntPolynomial(), IntPolynomial(tuple(rem))
        quot = [0] * (len(rem) - k)
        support = [(i, a) for i, a in enumerate(d[:-1]) if a]
        for top in range(len(rem) - 1, k - 1, -1):
            lead = rem[top]
            if lead:
                shift = top - k
                quot[shift] = lead
                rem[top] = 0
                for i, a in support:
                    rem[shift + i] -= lead * a
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:k]))

    @classmethod
    def indicator(cls, elements: Iterable[int]) -> "IntPolynomial":
        elements = list(elements)
        c = [0] * (max(elements) + 1 if elements else 0)
        for j in elements:
            c[j] += 1
        return cls(tuple(c))


@lru_cache(maxsize=None)
def _cyclotomic(s: int) -> tuple[int, ...]:
    poly = IntPolynomial((-1,) + (0,) * (s - 1) + (1,))
    for d in range(1, s):
        if s % d == 0:
            poly, rem = poly.divmod(IntPolynomial(_cyclotomic(d)))
            assert rem.is_zero()
    return poly.coefficients


def cyclotomic(s: int) -> IntPolynomial:
    """The s-th cyclotomic polynomial, by exact division of x^s - 1."""
    if s < 1:
        raise ValueError("cyclotomic index must be positive")
    return IntPolynomial(_cyclotomic(s))


def mobius(n: int) -> int:
    f = factorize(n) if n > 1 else ()
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n: int) -> int:
    out = n
    for q, _ in factorize(n) if n > 1 else ():
        out -= out // q
    return out


def ramanujan_sum(q: int, k: int) -> int:
    """c_q(k) = mu(q/g) phi(q) / phi(q/g) with g = gcd(k, q)."""
    if q < 1:
        raise ValueError("q must be positive")
    g = gcd(k, q)
    return mobius(q // g) * totient(q) // totient(q // g)


def _reduce_mod_xs_minus_1(elements: Iterable[int], s: int) -> IntPolynomial:
    c = [0] * s
    for j in elements:
        c[j % s] += 1
    return IntPolynomial(tuple(c))


def _divisor_test(elements: tuple[int, ...], n: int, k: int) -> bool:
    s = n // k
    # Phi_s divides x^s - 1, so reducing p_J mod x^s - 1 first keeps the division small
    _, rem = _reduce_mod_xs_minus_1(elements, s).divmod(cyclotomic(s))
    return rem.is_zero()


def zero_set_divisors_of(index_set: IndexSet) -> DivisorSet:
    n = index_set.n
    if not len(index_set):
        raise ValueError("zero-set divisors need a nonempty frequency set")
    return DivisorSet(n, tuple(k for k in divisors_proper(n) if _divisor_test(index_set.elements, n, k)))


@dataclass(frozen=True, eq=False)
class Idempotent:
    """h_J = F^{-1} 1_J with h(m) = (1/N) sum_{j in J} exp(2 pi i m j / N)."""

    support: IndexSet
    _divisors: list = field(default_factory=list, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __eq__(self, other):
        return isinstance(other, Idempotent) and other.support == self.support

    def __hash__(self):
        return hash(self.support)

    @classmethod
    def of(cls, n: ModulusLike, elements: Iterable[int]) -> "Idempotent":
        return cls(IndexSet(modulus_value(n), tuple(elements)))

    @property
    def n(self) -> int:
        return self.support.n

    @property
    def divisors(self) -> DivisorSet:
        if not self._divisors:
            with self._lock:
                if not self._divisors:
                    self._divisors.append(zero_set_divisors_of(self.support))
        return self._divisors[0]

    def value(self, m: int) -> complex:
        return eval_numeric(self, m)

    def values(self) -> np.ndarray:
        return eval_all(self.support)

    def to_json(self, with_divisors: bool = True) -> dict:
        out = self.support.to_json()
        if with_divisors:
            out["divisors"] = list(self.divisors.divisors)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Idempotent":
        h = cls(IndexSet.from_json(data))
        if "divisors" in data:
            h._divisors.append(DivisorSet(h.n, tuple(data["divisors"])))
        return h


def _as_idempotent(h) -> Idempotent:
    return h if isinstance(h, Idempotent) else Idempotent(h)


def eval_numeric(h, m: int) -> complex:
    h = _as_idempotent(h)
    n = h.n
    if not 0 <= m < n:
        raise ValueError(f"{m} is not a residue mod {n}")
    phases = np.array([(m * j) % n for j in h.support], dtype=float)
    return complex(np.exp(2j * np.pi * phases / n).sum() / n)


def eval_all(index_set: IndexSet) -> np.ndarray:
    """h_J(m) for every m in Z_N."""
    n = index_set.n
    spectrum = np.zeros(n)
    spectrum[list(index_set.elements)] = 1.0
    return np.fft.ifft(spectrum)


def numeric_zero_set(index_set: IndexSet, tol: float = 1e-9) -> IndexSet:
    """Residues where |h_J| < tol * h_J(0), found by floating-point evaluation."""
    values = np.abs(eval_all(index_set))
    return IndexSet(index_set.n, tuple(int(m) for m in np.nonzero(values < tol * values[0])[0]))


def zero_set_divisors(h) -> DivisorSet:
    return _as_idempotent(h).divisors


def zero_set(h) -> IndexSet:
    h = _as_idempotent(h)
    return zero_set_from_divisors(h.divisors)


def zero_set_from_divisors(divisors: DivisorSet) -> IndexSet:
    n = divisors.n
    wanted = set(divisors.divisors)
    return IndexSet(n, tuple(i for i in range(1, n) if gcd(i, n) in wanted))


def divisors_from_zero_set(zeros: IndexSet) -> DivisorSet:
    """Express a zero set as a union of gcd classes; raise if it is not one."""
    n = zeros.n
    if 0 in zeros:
        raise ValueError("0 is never a zero of an idempotent")
    classes = {gcd(i, n) for i in zeros}
    divisors = DivisorSet(n, tuple(classes))
    if zero_set_from_divisors(divisors) != zeros:
        raise ValueError(f"{list(zeros)} is not a union of gcd classes mod {n}")
    return divisors


# --- batch exact zero sets ---------------------------------------------------


@lru_cache(maxsize=64)
def remainder_matrix(n: int) -> tuple[np.ndarray, tuple[tuple[int, int, int], ...]]:
    """Row j holds the coefficients of x^j mod Phi_s for each s | N, s > 1.

    Also returns, for each proper divisor k (ascending), the column slice
    (start, stop) of the block for s = N/k together with k.  Summing the rows
    of J gives p_J mod Phi_s blockwise, so a block of zeros marks k in D(h_J).
    """
    blocks = []
    spans = []
    start = 0
    for k in divisors_proper(n):
        s = n // k
        phi = cyclotomic(s)
        width = phi.degree
        block = np.zeros((s, width), dtype=np.int64)
        for j in range(s):
            _, rem = IntPolynomial((0,) * j + (1,)).divmod(phi)
            block[j, : len(rem.coefficients)] = rem.coefficients
        blocks.append(block[np.arange(n) % s])
        spans.append((k, start, start + width))
        start += width
    matrix = np.concatenate(blocks, axis=1) if blocks else np.zeros((n, 0), dtype=np.int64)
    matrix.setflags(write=False)
    return matrix, tuple(spans)


def _masks_from_sums(sums: np.ndarray, spans) -> np.ndarray:
    """Bit b of the result is set when the block of the b-th proper divisor is all zero."""
    masks = np.zeros(sums.shape[:-1], dtype=np.int64)
    for bit, (_, a, b) in enumerate(spans):
        masks |= (~np.any(sums[..., a:b], axis=-1)).astype(np.int64) << bit
    return masks


def divisor_masks(n: int, subsets: np.ndarray) -> np.ndarray:
    """Exact D(h_J) bitmasks for each row of a (count, size) array of elements."""
    matrix, spans = remainder_matrix(n)
    subsets = np.asarray(subsets, dtype=np.int64)
    sums = matrix[subsets].sum(axis=-2)
    return _masks_from_sums(sums, spans)


def mask_to_divisors(n: int, mask: int) -> DivisorSet:
    props = divisors_proper(n)
    return DivisorSet(n, tuple(k for b, k in enumerate(props) if mask >> b & 1))


def divisors_to_mask(divisors: DivisorSet) -> int:
    props = divisors_proper(divisors.n)
    return sum(1 << props.index(k) for k in divisors.divisors)


def combination_chunks(n: int, size: int, chunk: int = 1 << 16):
    """Lexicographic size-subsets of range(n), as int arrays of at most ``chunk`` rows."""
    it = itertools.combinations(range(n), size)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(len(block), size)


def realizable_divisor_masks(n: int, bounds: SearchBounds | None = None) -> dict[int, frozenset[int]]:
    """Every D(h_J) over nonempty J, mapped to the set of sizes |J| realizing it.

    Sweeps all 2^N subsets by splitting the element range into a low and a
    high half and adding precomputed partial sums.
    """
    resolve(bounds).check("prescribe_subsets", 2**n, "subset count")
    matrix, spans = remainder_matrix(n)
    low_n = n // 2
    high_n = n - low_n

    def partial_sums(offset, count):
        sums = np.zeros((1 << count, matrix.shape[1]), dtype=np.int64)
        sizes = np.zeros(1 << count, dtype=np.int64)
        for bit in range(count):
            half = 1 << bit
            sums[half : 2 * half] = sums[:half] + matrix[offset + bit]
            sizes[half : 2 * half] = sizes[:half] + 1
        return sums, sizes

    low_sums, low_sizes = partial_sums(0, low_n)
    high_sums, high_sizes = partial_sums(low_n, high_n)
    found: dict[int, set[int]] = {}
    for h in range(1 << high_n):
        masks = _masks_from_sums(low_sums + high_sums[h], spans)
        # encode (mask, size) in one integer so a single unique() dedupes both
        keys = masks * (n + 1) + low_sizes + high_sizes[h]
        if h == 0:
            keys = keys[1:]
        for key in np.unique(keys).tolist():
            found.setdefault(key // (n + 1), set()).add(key % (n + 1))
    return {mask: frozenset(sizes) for mask, sizes in found.items()}


def realizable_divisor_sets(n: ModulusLike, bounds: SearchBounds | None = None) -> dict[DivisorSet, frozenset[int]]:
    """Each divisor set that is D(h_J) for some J, with the sizes of all such J."""
    n = modulus_value(n)
    return {mask_to_divisors(n, m): sizes for m, sizes in sorted(realizable_divisor_masks(n, bounds).items())}


# --- the prescribed zero-set problem -------------------------------------------


def prescribe_zero_set(
    divisors: DivisorSet,
    mode: str = "constructive",
    bounds: SearchBounds | None = None,
) -> IndexSet | None:
    """Find J whose idempotent has zero-set divisors exactly ``divisors``.

    ``constructive`` needs N = p^M and returns the minimal solution: the
    digit combinations placed in the columns dual to log D.  ``exhaustive``
    scans subsets by increasing size, lexicographically, and returns the
    first exact match or None.
    """
    n = divisors.n
    if mode == "constructive":
        pm = Modulus(n).prime_power
        if pm is None:
            raise ValueError(f"constructive mode needs a prime-power modulus, got {n}")
        p, m = pm
        columns = dual_markings(divisors.log_columns(), m)
        elements = [
            sum(d * p**c for c, d in zip(columns, digits))
            for digits in itertools.product(range(p), repeat=len(columns))
        ]
        return IndexSet(n, tuple(elements))
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    resolve(bounds).check("prescribe_subsets", 2**n, "subset count")
    target = divisors_to_mask(divisors)
    for size in range(1, n + 1):
        for chunk in combination_chunks(n, size):
            hits = np.nonzero(divisor_masks(n, chunk) == target)[0]
            if len(hits):
                return IndexSet(n, tuple(chunk[hits[0]].tolist()))
    return None


def is_block_concatenation_form(index_set: IndexSet, p: int, m: int, marked: Iterable[int]) -> bool:
    """Whether J splits into blocks that are each valid tables with the dual markings of ``marked``.

    Blocks have p^{|marked|} rows.  A block is a valid table exactly when it
    has that many rows and the p-adic valuations of its pairwise differences
    are the dual columns, so the search grows blocks one element at a time
    and prunes on valuations.
    """
    if index_set.n != p**m:
        raise ValueError(f"index set lives in Z_{index_set.n}, not Z_{p}^{m}")
    dual = frozenset(dual_markings(tuple(marked), m))
    size = p ** len(dual)
    elements = list(index_set.elements)
    if len(elements) % size:
        return False

    def valuation(a, b):
        return p_adic_valuation(a - b, p)

    def grow(block, candidates, remaining):
        if len(block) == size:
            if {valuation(a, b) for a, b in itertools.combinations(block, 2)} != dual:
                return False
            rest = [x for x in remaining if x not in block]
            return partition(rest)
        for i, x in enumerate(candidates):
            if all(valuation(x, y) in dual for y in block):
                if grow(block + [x], candidates[i + 1 :], remaining):
                    return True
        return False

    def partition(rest: Sequence[int]) -> bool:
        if not rest:
            return True
        head, tail = rest[0], list(rest[1:])
        return grow([head], tail, rest)

    return partition(elements)


def subset_count(n: int, sizes: Iterable[int]) -> int:
    return sum(comb(n, k) for k in sizes)
