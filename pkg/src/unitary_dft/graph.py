"""Difference (GCD) graphs on Z_N: cliques, odd holes and the divisibility scan.

Vertices are residues mod N and i ~ j when gcd(i - j, N) lies in a fixed
divisor set D.  Adjacency rows are Python int bitsets; since the graph is
circulant, row i is the connection set rotated by i.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import SearchBounds, resolve
from .digit_table import canonical_valid_table
from .errors import SearchBoundExceeded
from .idempotent import realizable_divisor_sets
from .zn import DivisorSet, IndexSet, Modulus, divisors_proper


def _lsb_index(x: int) -> int:
    return (x & -x).bit_length() - 1


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class DifferenceGraph:
    n: int
    divisors: DivisorSet
    adjacency: tuple[int, ...] = field(repr=False)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)

    def neighbours(self, i: int) -> tuple[int, ...]:
        return tuple(_bits(self.adjacency[i]))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.adjacency[i] >> (i + 1) << (i + 1))]

    def edge_count(self) -> int:
        return sum(bin(row).count("1") for row in self.adjacency) // 2

    def complement(self) -> "DifferenceGraph":
        return build_graph(self.divisors.complement())


def build_graph(divisors: DivisorSet) -> DifferenceGraph:
    """Circulant graph joining residues whose difference has gcd with N in ``divisors``."""
    n = divisors.n
    wanted = set(divisors.divisors)
    connection = 0
    for i in range(1, n):
        if math.gcd(i, n) in wanted:
            connection |= 1 << i
    full = (1 << n) - 1
    rows = tuple(((connection << i) | (connection >> (n - i))) & full for i in range(n))
    return DifferenceGraph(n, divisors, rows)


def is_clique(graph: DifferenceGraph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return all(graph.has_edge(a, b) for a, b in itertools.combinations(vs, 2))


def _greedy_colouring(candidates: int, adjacency: Sequence[int]) -> list[tuple[int, int]]:
    """(vertex, colour) pairs in colour order; colour c bounds the clique size among earlier vertices."""
    order = []
    uncoloured = candidates
    colour = 0
    while uncoloured:
        colour += 1
        available = uncoloured
        while available:
            v = _lsb_index(available)
            available &= ~adjacency[v] & ~(1 << v)
            uncoloured &= ~(1 << v)
            order.append((v, colour))
    return order


def max_clique_search(graph: DifferenceGraph, bounds: SearchBounds | None = None) -> IndexSet:
    """Branch and bound with a colouring bound; vertex 0 is fixed by vertex-transitivity."""
    resolve(bounds).check("clique_n", graph.n, "clique search modulus")
    adjacency = graph.adjacency
    best: list[int] = [0]

    def expand(clique: list[int], candidates: int) -> None:
        if not candidates:
            if len(clique) > len(best):
                best[:] = clique
            return
        order = _greedy_colouring(candidates, adjacency)
        for v, colour in reversed(order):
            if len(clique) + colour <= len(best):
                return
            expand(clique + [v], candidates & adjacency[v])
            candidates &= ~(1 << v)

    expand([0], adjacency[0])
    return IndexSet(graph.n, tuple(best))


def max_clique(graph: DifferenceGraph, bounds: SearchBounds | None = None) -> IndexSet:
    """A maximum clique.  Prime-power moduli use the canonical digit-table construction."""
    pm = Modulus(graph.n).prime_power
    if pm is not None:
        p, m = pm
        return canonical_valid_table(p, m, graph.divisors.log_columns()).index_set()
    return max_clique_search(graph, bounds)


def _oriented(graph: DifferenceGraph, in_complement: bool) -> tuple[int, ...]:
    if not in_complement:
        return graph.adjacency
    full = graph.full
    return tuple(full & ~row & ~(1 << i) for i, row in enumerate(graph.adjacency))


def is_hole(graph: DifferenceGraph, cycle: Sequence[int], in_complement: bool = False) -> bool:
    """Whether ``cycle`` is an induced (chordless) cycle of length at least 4."""
    adjacency = _oriented(graph, in_complement)
    k = len(cycle)
    if k < 4 or len(set(cycle)) != k:
        return False
    for a in range(k):
        for b in range(a + 1, k):
            consecutive = b == a + 1 or (a == 0 and b == k - 1)
            if bool(adjacency[cycle[a]] >> cycle[b] & 1) != consecutive:
                return False
    return True


def find_odd_hole(
    graph: DifferenceGraph,
    in_complement: bool = False,
    max_len: int | None = None,
    vertices: Iterable[int] | None = None,
    bounds: SearchBounds | None = None,
) -> tuple[int, ...] | None:
    """A chordless cycle of odd length between 5 and ``max_len``, or None.

    Induced paths are grown from a start vertex; a path vertex may not touch
    any earlier path vertex except its predecessor, and a candidate adjacent
    to the start closes the cycle.  Without a vertex restriction the start is
    0, which loses nothing because the graph is vertex-transitive.  With a
    restriction each allowed vertex is tried as the smallest cycle vertex.
    """
    b = resolve(bounds)
    b.check("hole_n", graph.n, "hole search modulus")
    if max_len is None:
        max_len = b.hole_len
    if max_len < 5:
        return None
    adjacency = _oriented(graph, in_complement)
    if vertices is None:
        starts = [0]
        allowed_all = (1 << graph.n) - 1
    else:
        allowed_all = 0
        for v in vertices:
            allowed_all |= 1 << v
        starts = sorted(_bits(allowed_all))

    for v0 in starts:
        allowed = allowed_all & ~((1 << (v0 + 1)) - 1) if vertices is not None else allowed_all & ~1
        near_start = adjacency[v0]
        found = _extend_paths(adjacency, v0, near_start, allowed, max_len)
        if found is not None:
            return found
    return None


def _extend_paths(adjacency, v0, near_start, allowed, max_len):
    # Each stack entry is an induced path starting at v0 together with the
    # vertices a further extension must avoid: the path itself and the
    # neighbourhoods of all interior vertices.
    stack = [([v0, v1], (1 << v0) | (1 << v1)) for v1 in reversed(list(_bits(near_start & allowed)))]
    while stack:
        path, blocked = stack.pop()
        last = path[-1]
        extension_block = blocked | adjacency[last]
        for w in _bits(adjacency[last] & allowed & ~blocked):
            if near_start >> w & 1:
                # w closes the cycle; require path[1] < w so each cycle is met in one direction
                length = len(path) + 1
                if length >= 5 and length % 2 and path[1] < w:
                    return tuple(path + [w])
            elif len(path) + 2 <= max_len:
                stack.append((path + [w], extension_block | (1 << w)))
    return None


@dataclass(frozen=True)
class BergeReport:
    n: int
    divisors: tuple[int, ...]
    max_len: int
    holes: tuple[tuple[int, ...], ...]
    complement_holes: tuple[tuple[int, ...], ...]

    @property
    def berge(self) -> bool:
        return not self.holes and not self.complement_holes

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "divisors": list(self.divisors),
            "max_len": self.max_len,
            "holes": [list(h) for h in self.holes],
            "complement_holes": [list(h) for h in self.complement_holes],
            "berge": self.berge,
        }


def berge_certify(graph: DifferenceGraph, max_len: int | None = None, bounds: SearchBounds | None = None) -> BergeReport:
    """Search the graph and its complement for odd holes up to ``max_len``."""
    b = resolve(bounds)
    max_len = b.hole_len if max_len is None else max_len
    inside = find_odd_hole(graph, False, max_len, bounds=b)
    outside = find_odd_hole(graph, True, max_len, bounds=b)
    return BergeReport(
        graph.n,
        graph.divisors.divisors,
        max_len,
        (inside,) if inside else (),
        (outside,) if outside else (),
    )


def graph_report(graph: DifferenceGraph, max_len: int | None = None, bounds: SearchBounds | None = None) -> dict:
    clique = max_clique(graph, bounds)
    report = berge_certify(graph, max_len, bounds)
    return {
        "n": graph.n,
        "divisors": list(graph.divisors.divisors),
        "max_clique": list(clique.elements),
        "holes": [list(h) for h in report.holes + report.complement_holes],
    }


def export_dot(graph: DifferenceGraph, radius: float = 4.0) -> str:
    """DOT text with vertices on a circle (neato pos hints) and each edge once."""
    lines = [f'graph "Z{graph.n}" {{', "  node [shape=circle];"]
    for v in range(graph.n):
        angle = math.pi / 2 - 2 * math.pi * v / graph.n
        x, y = radius * math.cos(angle), radius * math.sin(angle)
        lines.append(f'  {v} [pos="{x:.4f},{y:.4f}!"];')
    for a, b in graph.edges():
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScanEntry:
    n: int
    divisors: tuple[int, ...]
    realizable: bool | None
    clique_size: int | None
    sampling_sizes: tuple[int, ...]

    @property
    def violation(self) -> bool:
        """A space with a sampling set whose dimension does not divide N."""
        return any(self.n % d for d in self.sampling_sizes)

    @property
    def anomaly(self) -> bool:
        """A divisor set not realized by any idempotent whose clique size does not divide N."""
        return self.realizable is False and self.clique_size is not None and self.n % self.clique_size != 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "divisors": list(self.divisors),
            "realizable": self.realizable,
            "clique_size": self.clique_size,
            "sampling_sizes": list(self.sampling_sizes),
            "violation": self.violation,
            "anomaly": self.anomaly,
        }


def _is_composite(n: int) -> bool:
    return len(divisors_proper(n)) > 1


def divisibility_scan(
    moduli: Iterable[int],
    sizes: Iterable[int] | None = None,
    bounds: SearchBounds | None = None,
) -> list[ScanEntry]:
    """For each composite N, every divisor set D with its realizability and clique size.

    J has an orthogonal sampling set exactly when the difference graph of
    D(h_J) has a clique of size |J| (a clique of size |J| is the sampling
    set, and no clique can be larger).  ``sampling_sizes`` lists the sizes
    |J| <= N/2 for which such a J exists; any of them not dividing N would
    contradict the divisibility conjecture.  Divisor sets that no idempotent
    realizes are kept and marked, since their cliques can have sizes not
    dividing N.
    """
    b = resolve(bounds)
    wanted = None if sizes is None else set(sizes)
    entries = []
    for n in moduli:
        if not _is_composite(n):
            continue
        realized = realizable_divisor_sets(n, b)
        props = divisors_proper(n)
        for r in range(len(props) + 1):
            for combo in itertools.combinations(props, r):
                d = DivisorSet(n, combo)
                clique = len(max_clique(build_graph(d), b))
                realizable = d in realized
                sampling = ()
                if realizable:
                    sampling = tuple(
                        s for s in sorted(realized[d])
                        if s == clique and 2 * s <= n and (wanted is None or s in wanted)
                    )
                entries.append(ScanEntry(n, d.divisors, realizable, clique, sampling))
    return entries


def scan_divisor_set(divisors: DivisorSet, bounds: SearchBounds | None = None) -> ScanEntry:
    """Single-divisor-set scan; realizability or clique size is None when out of reach."""
    b = resolve(bounds)
    n = divisors.n
    try:
        realized = realizable_divisor_sets(n, b)
        realizable = divisors in realized
        sizes = realized.get(divisors, frozenset())
    except SearchBoundExceeded:
        realizable, sizes = None, frozenset()
    try:
        clique = len(max_clique(build_graph(divisors), b))
    except SearchBoundExceeded:
        clique = None
    sampling = tuple(s for s in sorted(sizes) if s == clique and 2 * s <= n)
    return ScanEntry(n, divisors.divisors, realizable, clique, sampling)
