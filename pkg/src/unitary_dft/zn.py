"""Number-theoretic primitives on the cyclic group Z_N."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, Union

from .config import resolve


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization as ((prime, exponent), ...) in increasing prime order."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    factors = []
    rest = n
    q = 2
    while q * q <= rest:
        if rest % q == 0:
            e = 0
            while rest % q == 0:
                rest //= q
                e += 1
            factors.append((q, e))
        q += 1 if q == 2 else 2
    if rest > 1:
        factors.append((rest, 1))
    return tuple(factors)


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


@dataclass(frozen=True)
class Modulus:
    """The order N of the cyclic group, together with its factorization."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise TypeError(f"modulus must be an int, got {self.n!r}")
        if self.n < 2:
            raise ValueError(f"modulus must be at least 2, got {self.n}")
        resolve(None).check("max_modulus", self.n, "modulus")

    @property
    def factorization(self) -> tuple[tuple[int, int], ...]:
        return factorize(self.n)

    @property
    def prime_power(self) -> tuple[int, int] | None:
        """(p, M) when N = p^M, otherwise None."""
        f = self.factorization
        return f[0] if len(f) == 1 else None

    def __int__(self) -> int:
        return self.n


ModulusLike = Union[Modulus, int]


def modulus_value(n: ModulusLike) -> int:
    if isinstance(n, Modulus):
        return n.n
    n = int(n)
    if n < 2:
        raise ValueError(f"modulus must be at least 2, got {n}")
    return n


@dataclass(frozen=True)
class IndexSet:
    """A subset of Z_N, stored sorted so equal sets compare and hash equal."""

    n: int
    elements: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = modulus_value(self.n)
        elems = tuple(sorted(int(x) for x in self.elements))
        if len(set(elems)) != len(elems):
            raise ValueError(f"duplicate elements in index set {list(self.elements)}")
        if elems and (elems[0] < 0 or elems[-1] >= n):
            raise ValueError(f"elements must lie in [0, {n - 1}], got {list(self.elements)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "elements", elems)

    @classmethod
    def reduce(cls, n: ModulusLike, values: Iterable[int]) -> "IndexSet":
        """Build from arbitrary integers, reducing mod N and dropping repeats."""
        n = modulus_value(n)
        return cls(n, tuple(sorted({v % n for v in values})))

    @classmethod
    def full(cls, n: ModulusLike) -> "IndexSet":
        n = modulus_value(n)
        return cls(n, tuple(range(n)))

    @property
    def modulus(self) -> Modulus:
        return Modulus(self.n)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def mask(self) -> int:
        """Bitmask with bit i set for every element i."""
        m = 0
        for x in self.elements:
            m |= 1 << x
        return m

    def translate(self, t: int) -> "IndexSet":
        return IndexSet.reduce(self.n, (x + t for x in self.elements))

    def negate(self) -> "IndexSet":
        return IndexSet.reduce(self.n, (-x for x in self.elements))

    def to_json(self) -> dict:
        return {"n": self.n, "elements": list(self.elements)}

    @classmethod
    def from_json(cls, data: dict | str) -> "IndexSet":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), tuple(data["elements"]))

    def __repr__(self) -> str:
        return f"IndexSet(n={self.n}, {{{', '.join(map(str, self.elements))}}})"


@dataclass(frozen=True)
class DivisorSet:
    """A set of proper divisors of N (each divides N and is < N)."""

    n: int
    divisors: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = modulus_value(self.n)
        divs = tuple(sorted(set(int(k) for k in self.divisors)))
        bad = [k for k in divs if k < 1 or k >= n or n % k]
        if bad:
            raise ValueError(f"{bad} are not proper divisors of {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "divisors", divs)

    def __len__(self) -> int:
        return len(self.divisors)

    def __iter__(self):
        return iter(self.divisors)

    def __contains__(self, k) -> bool:
        return k in self.divisors

    def complement(self) -> "DivisorSet":
        return DivisorSet(self.n, tuple(k for k in divisors_proper(self.n) if k not in self.divisors))

    def log_columns(self) -> tuple[int, ...]:
        """Exponents {l : p^l in D} for a prime-power modulus."""
        pm = Modulus(self.n).prime_power
        if pm is None:
            raise ValueError(f"{self.n} is not a prime power")
        p, _ = pm
        out = []
        for k in self.divisors:
            e = 0
            while k > 1:
                k //= p
                e += 1
            out.append(e)
        return tuple(out)

    @classmethod
    def from_log_columns(cls, p: int, m: int, columns: Iterable[int]) -> "DivisorSet":
        return cls(p**m, tuple(p**l for l in columns))

    def to_json(self) -> dict:
        return {"n": self.n, "divisors": list(self.divisors)}


@lru_cache(maxsize=None)
def _proper_divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for q, e in factorize(n):
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return tuple(sorted(d for d in divs if d < n))


def divisors_proper(n: ModulusLike) -> tuple[int, ...]:
    """All divisors of N strictly smaller than N, ascending."""
    return _proper_divisors(modulus_value(n))


def gcd_class(i: int, n: ModulusLike) -> int:
    """gcd(i, N), with the convention that 0 belongs to the class N."""
    n = modulus_value(n)
    if not 0 <= i < n:
        raise ValueError(f"{i} is not a residue mod {n}")
    return gcd(i, n)  # gcd(0, n) == n already


def gcd_classes(n: ModulusLike) -> dict[int, tuple[int, ...]]:
    """Map each proper divisor k to the residues whose gcd with N is k."""
    n = modulus_value(n)
    classes: dict[int, list[int]] = {k: [] for k in divisors_proper(n)}
    for i in range(1, n):
        classes[gcd(i, n)].append(i)
    return {k: tuple(v) for k, v in classes.items()}


def digits_base_p(z: int, p: int, m: int) -> tuple[int, ...]:
    """Base-p digits of z, least significant first, padded to length m."""
    if not 0 <= z < p**m:
        raise ValueError(f"{z} is outside [0, {p}^{m})")
    out = []
    for _ in range(m):
        z, r = divmod(z, p)
        out.append(r)
    return tuple(out)


def from_digits(digits: Iterable[int], p: int) -> int:
    return sum(a * p**j for j, a in enumerate(digits))


def first_nonzero_digit_index(z: int, p: int, m: int) -> int | None:
    """Index of the lowest nonzero base-p digit of z, i.e. the p-adic valuation; None for 0."""
    if not 0 <= z < p**m:
        raise ValueError(f"{z} is outside [0, {p}^{m})")
    if z == 0:
        return None
    i = 0
    while z % p == 0:
        z //= p
        i += 1
    return i


def bracelet(index_set: IndexSet) -> frozenset[IndexSet]:
    """Orbit of an index set under translation and negation mod N."""
    seen = {index_set}
    frontier = [index_set]
    while frontier:
        current = frontier.pop()
        for nxt in (current.translate(-1), current.negate()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)
