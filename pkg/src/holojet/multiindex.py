"""Multi-index bookkeeping for jet coordinates.

A jet block of order r over an n-dimensional base carries one coordinate
per multi-index I with |I| <= r.  Everything downstream (lifting, Cartan
residuals, CSV headers) relies on a single fixed enumeration order, so it
lives here and nowhere else.
"""
from __future__ import annotations

import math
from functools import lru_cache

MultiIndex = tuple[int, ...]


def degree(index: MultiIndex) -> int:
    return sum(index)


@lru_cache(maxsize=None)
def jet_indices(n: int, r: int) -> tuple[MultiIndex, ...]:
    """All multi-indices with |I| <= r, graded: by degree, then lex-descending.

    For n=2, r=2 the order is (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).
    """
    if n < 1 or r < 0:
        raise ValueError(f"need n >= 1 and r >= 0, got n={n}, r={r}")
    out: list[MultiIndex] = []
    for d in range(r + 1):
        out.extend(sorted(_indices_of_degree(n, d), reverse=True))
    return tuple(out)


# canonical name used at API boundaries; jet_indices is the short internal one
enumerate_multiindices = jet_indices


def _indices_of_degree(n: int, d: int) -> list[MultiIndex]:
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        out.extend((first, *rest) for rest in _indices_of_degree(n - 1, d - first))
    return out


@lru_cache(maxsize=None)
def indices_of_degree(n: int, d: int) -> tuple[MultiIndex, ...]:
    """Multi-indices with |I| = d exactly, lex-descending."""
    return tuple(sorted(_indices_of_degree(n, d), reverse=True))


@lru_cache(maxsize=None)
def index_position(n: int, r: int) -> dict[MultiIndex, int]:
    """Map multi-index -> row in the order-r jet block."""
    return {index: i for i, index in enumerate(jet_indices(n, r))}


def block_count(n: int, r: int) -> int:
    """Number of multi-indices with |I| <= r, i.e. C(n+r, r)."""
    return math.comb(n + r, r)


def increment(index: MultiIndex, axis: int) -> MultiIndex:
    return index[:axis] + (index[axis] + 1,) + index[axis + 1:]


def decrement(index: MultiIndex, axis: int) -> MultiIndex:
    if index[axis] == 0:
        raise ValueError(f"cannot decrement axis {axis} of {index}")
    return index[:axis] + (index[axis] - 1,) + index[axis + 1:]


def decompositions(index: MultiIndex) -> list[tuple[MultiIndex, MultiIndex]]:
    """All ordered pairs (I', I'') of multi-indices with I' + I'' = I."""
    pairs = [((), ())]
    for comp in index:
        pairs = [
            (left + (a,), right + (comp - a,))
            for left, right in pairs
            for a in range(comp + 1)
        ]
    return pairs


def k1_constant(n: int, r: int) -> int:
    """Largest number of ordered decompositions over all |I| <= r."""
    return max(len(decompositions(index)) for index in jet_indices(n, r))


def k2_constant(n: int, r: int) -> int:
    """Number of multi-indices with |I| <= r."""
    return len(jet_indices(n, r))


def bump_level(n: int, r: int) -> int:
    """Smallest N with N^2 > 9 * K1 * K2."""
    target = 9 * k1_constant(n, r) * k2_constant(n, r)
    return math.isqrt(target) + 1
