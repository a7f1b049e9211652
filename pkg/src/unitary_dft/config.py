"""Search bounds shared by the brute-force and exhaustive routines.

Every exhaustive routine takes an optional ``bounds`` argument; when omitted
the process-wide defaults below are used.  The environment variable
``DFT_UNITARY_MAX_SEARCH`` overrides the brute-force subset/pair bounds.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import SearchBoundExceeded

ENV_VAR = "DFT_UNITARY_MAX_SEARCH"


@dataclass(frozen=True)
class SearchBounds:
    max_modulus: int = 2**20
    prescribe_subsets: int = 2**24
    enumeration: int = 10**6
    count_subsets: int = 10**7
    count_pairs: int = 10**7
    clique_n: int = 64
    hole_n: int = 100
    hole_len: int = 13
    tiling_candidates: int = 10**7
    sweep_subsets: int = 25 * 10**6

    def check(self, name: str, value: int, what: str = "search size") -> None:
        limit = getattr(self, name)
        if value > limit:
            raise SearchBoundExceeded(f"{what} {value} exceeds bound {name}={limit}")


def default_bounds() -> SearchBounds:
    bounds = SearchBounds()
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            limit = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
        bounds = replace(
            bounds,
            prescribe_subsets=limit,
            count_subsets=limit,
            count_pairs=limit,
            tiling_candidates=limit,
            sweep_subsets=limit,
        )
    return bounds


def resolve(bounds: SearchBounds | None) -> SearchBounds:
    return default_bounds() if bounds is None else bounds
