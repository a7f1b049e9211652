"""Marked digit-tables for index sets of Z_{p^M}.

A digit-table lists the base-p expansions of an index set, one row per
element, column j holding the coefficient of p^j.  Rows are kept in
lexicographic order of the digit tuples with column 0 compared first, which
is the order the block recursion relies on.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .config import SearchBounds, resolve
from .zn import IndexSet, digits_base_p, from_digits

Row = tuple[int, ...]


def p_adic_valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero is undefined")
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _first_difference(a: Row, b: Row) -> int | None:
    for j, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return j
    return None


@dataclass(frozen=True)
class DigitTable:
    p: int
    m: int
    marked: tuple[int, ...]
    rows: tuple[Row, ...]

    def __post_init__(self):
        marked = tuple(sorted(set(self.marked)))
        if marked and (marked[0] < 0 or marked[-1] >= self.m):
            raise ValueError(f"marked columns {marked} outside [0, {self.m - 1}]")
        rows = tuple(sorted(tuple(int(d) for d in r) for r in self.rows))
        for r in rows:
            if len(r) != self.m or any(not 0 <= d < self.p for d in r):
                raise ValueError(f"row {r} is not a length-{self.m} base-{self.p} digit row")
        if len(set(rows)) != len(rows):
            raise ValueError("digit-table rows must be distinct")
        object.__setattr__(self, "marked", marked)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.p**self.m

    @property
    def log_d(self) -> int:
        return len(self.marked)

    def elements(self) -> tuple[int, ...]:
        """Integers represented by the rows, in row order."""
        return tuple(from_digits(r, self.p) for r in self.rows)

    def index_set(self) -> IndexSet:
        return IndexSet(self.n, self.elements())

    def render(self) -> str:
        """Plain-text layout with one column per power of p; marked columns are bracketed."""
        def cell(j, text):
            return f"[{text}]" if j in self.marked else f" {text} "

        headers = [f"p^{j}" for j in range(self.m)]
        width = max(len(h) for h in headers) + 2
        lines = [" ".join(cell(j, h).center(width) for j, h in enumerate(headers))]
        for r in self.rows:
            lines.append(" ".join(cell(j, str(d)).center(width) for j, d in enumerate(r)))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "marked": list(self.marked), "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict | str) -> "DigitTable":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["p"]), int(data["m"]), tuple(data["marked"]), tuple(tuple(r) for r in data["rows"]))


def build_table(index_set: IndexSet, p: int, m: int, marked: Iterable[int]) -> DigitTable:
    if index_set.n != p**m:
        raise ValueError(f"index set lives in Z_{index_set.n}, not Z_{p}^{m}")
    return DigitTable(p, m, tuple(marked), tuple(digits_base_p(z, p, m) for z in index_set))


def pivots(table: DigitTable) -> tuple[int, ...]:
    # For lexicographically sorted rows the first-difference column of any
    # pair is the minimum over the adjacent pairs between them, so adjacent
    # pairs already produce every pivot.
    found = set()
    for a, b in zip(table.rows, table.rows[1:]):
        found.add(_first_difference(a, b))
    return tuple(sorted(found))


def is_valid(table: DigitTable) -> bool:
    return len(table.rows) == table.p ** len(table.marked) and pivots(table) == table.marked


def canonical_valid_table(p: int, m: int, marked: Iterable[int]) -> DigitTable:
    """Marked columns run over all digit combinations, unmarked columns are zero."""
    marked = tuple(sorted(set(marked)))
    rows = []
    for digits in itertools.product(range(p), repeat=len(marked)):
        row = [0] * m
        for col, d in zip(marked, digits):
            row[col] = d
        rows.append(tuple(row))
    return DigitTable(p, m, marked, tuple(rows))


DependenceMap = Callable[[tuple[int, ...]], int]


def construct_valid(
    p: int,
    m: int,
    marked: Iterable[int],
    prefix: Sequence[int] = (),
    maps: Mapping[int, DependenceMap] | None = None,
) -> DigitTable:
    """Build a valid table from the digits left of the first mark and per-column dependence maps.

    ``prefix`` fills the unmarked columns before the first marked column
    (all M columns when nothing is marked).  ``maps[c]`` gives the digit of
    unmarked column c as a function of the tuple of digits in the marked
    columns to its left; missing maps mean the constant 0.
    """
    marked = tuple(sorted(set(marked)))
    maps = dict(maps or {})
    first = marked[0] if marked else m
    if len(prefix) != first:
        raise ValueError(f"prefix must have {first} digits, got {len(prefix)}")
    if any(not 0 <= d < p for d in prefix):
        raise ValueError(f"prefix digits must lie in [0, {p - 1}]")
    stray = [c for c in maps if c in marked or c < first or not 0 <= c < m]
    if stray:
        raise ValueError(f"dependence maps given for columns {stray}, which are not free unmarked columns")
    rows = []
    for digits in itertools.product(range(p), repeat=len(marked)):
        row = list(prefix) + [0] * (m - first)
        assigned = dict(zip(marked, digits))
        for c in range(first, m):
            if c in assigned:
                row[c] = assigned[c]
            elif c in maps:
                left = tuple(assigned[k] for k in marked if k < c)
                value = maps[c](left)
                if not 0 <= value < p:
                    raise ValueError(f"map for column {c} returned {value}, not a base-{p} digit")
                row[c] = value
        rows.append(tuple(row))
    return DigitTable(p, m, marked, tuple(rows))


def decompose(table: DigitTable) -> tuple[Row, tuple[DigitTable, ...]]:
    """Split a valid table at its first marked column l0.

    Returns the constant row c (its digits left of l0, zeros elsewhere) and
    p blocks; block b holds, for the rows whose digit at l0 is b, the
    columns to the right of l0.  Each block is a valid table with
    M - l0 - 1 columns and marked columns shifted down by l0 + 1.
    """
    if not table.marked:
        raise ValueError("decompose needs at least one marked column")
    if not is_valid(table):
        raise ValueError("decompose needs a valid digit-table")
    p, m = table.p, table.m
    l0 = table.marked[0]
    head = table.rows[0][:l0]
    constant = head + (0,) * (m - l0)
    shifted = tuple(l - l0 - 1 for l in table.marked[1:])
    blocks = []
    for b in range(p):
        tails = tuple(r[l0 + 1 :] for r in table.rows if r[l0] == b)
        blocks.append(DigitTable(p, m - l0 - 1, shifted, tails))
    return constant, tuple(blocks)


def recompose(constant: Row, blocks: Sequence[DigitTable], l0: int) -> DigitTable:
    """Inverse of :func:`decompose`."""
    if not blocks:
        raise ValueError("need p blocks")
    p = blocks[0].p
    if len(blocks) != p:
        raise ValueError(f"need exactly {p} blocks, got {len(blocks)}")
    width = blocks[0].m
    m = l0 + 1 + width
    if len(constant) != m:
        raise ValueError(f"constant row has {len(constant)} digits, expected {m}")
    head = tuple(constant[:l0])
    rows = [head + (b,) + tail for b, block in enumerate(blocks) for tail in block.rows]
    marked = (l0,) + tuple(l + l0 + 1 for l in blocks[0].marked)
    return DigitTable(p, m, marked, tuple(rows))


def dual_markings(marked: Iterable[int], m: int) -> tuple[int, ...]:
    marked = tuple(marked)
    if any(not 0 <= l < m for l in marked):
        raise ValueError(f"marked columns {marked} outside [0, {m - 1}]")
    return tuple(sorted(m - l - 1 for l in marked))


def gap_vector(m: int, marked: Iterable[int]) -> tuple[int, ...]:
    """Unmarked-column counts before the first mark, between marks, and after the last."""
    marked = tuple(sorted(marked))
    bounds = (-1,) + marked + (m,)
    return tuple(bounds[i + 1] - bounds[i] - 1 for i in range(len(bounds) - 1))


def valid_table_count(p: int, m: int, marked: Iterable[int]) -> int:
    """Number of index sets with a valid table for these markings: p to the power sum r_i p^i."""
    return p ** sum(r * p**i for i, r in enumerate(gap_vector(m, marked)))


def enumerate_valid(p: int, m: int, marked: Iterable[int], bounds: SearchBounds | None = None) -> Iterator[IndexSet]:
    """Yield each index set whose digit-table with these markings is valid, exactly once."""
    marked = tuple(sorted(set(marked)))
    resolve(bounds).check("enumeration", valid_table_count(p, m, marked), "valid-table count")
    first = marked[0] if marked else m
    free = [c for c in range(first, m) if c not in marked]
    # the argument of a dependence map is the tuple of marked digits to the
    # left of its column, which we encode as an index into the map's table
    left_counts = [sum(1 for k in marked if k < c) for c in free]
    mark_rows = list(itertools.product(range(p), repeat=len(marked)))
    n = p**m
    mark_values = [sum(d * p**col for col, d in zip(marked, digits)) for digits in mark_rows]
    lookup = [
        [from_digits(digits[:k], p) for digits in mark_rows] for k in left_counts
    ]
    for prefix in itertools.product(range(p), repeat=first):
        base = from_digits(prefix, p)
        for tables in itertools.product(*(itertools.product(range(p), repeat=p**k) for k in left_counts)):
            elements = []
            for r, value in enumerate(mark_values):
                z = base + value
                for c, table, keys in zip(free, tables, lookup):
                    z += table[keys[r]] * p**c
                elements.append(z)
            yield IndexSet(n, tuple(elements))
