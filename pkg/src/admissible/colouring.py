"""I(m, m-2) families and the colouring they induce on coordinate triples.

In an I(m, m-2) family each pair {i, j} of coordinates is the zero set of
exactly one vector v(i, j).  For i < j < k the triple gets the colour
``(v(i,j)[k], v(i,k)[j], v(j,k)[i])``.  A constant colouring determines the
whole family, so admissibility of monochromatic families can be decided by
rebuilding them.
"""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .core import TernaryVector, VectorFamily, find_clash, is_I_set

__all__ = [
    "COLOURS",
    "Colour",
    "pair_vector",
    "induced_colouring",
    "reconstruct_monochromatic",
    "monochromatic_frontier",
    "parse_colour",
    "format_colour",
    "star_colour",
]

Colour = tuple[int, int, int]
COLOURS: tuple[Colour, ...] = tuple(
    (a, b, c) for a in (1, 2) for b in (1, 2) for c in (1, 2)
)


def parse_colour(s: str | Sequence[int]) -> Colour:
    c = tuple(int(ch) for ch in s)
    if len(c) != 3 or any(x not in (1, 2) for x in c):
        raise ValueError(f"a colour is three entries from {{1,2}}, got {s!r}")
    return c  # type: ignore[return-value]


def format_colour(c: Sequence[int]) -> str:
    return "".join(map(str, c))


def star_colour(c: Sequence[int]) -> Colour:
    return tuple(3 - x for x in c)  # type: ignore[return-value]


def _pair_index(family: VectorFamily) -> dict[tuple[int, int], TernaryVector]:
    m = family.m
    if m < 2 or not is_I_set(family, m, m - 2):
        raise ValueError(f"family is not an I({m},{m - 2}) set")
    out = {}
    for v in family:
        zeros = tuple(i for i, x in enumerate(v.entries) if x == 0)
        out[zeros] = v
    return out


def pair_vector(family: VectorFamily, i: int, j: int) -> TernaryVector:
    """The member of an I(m, m-2) family that vanishes exactly at ``i`` and ``j``."""
    if i == j:
        raise ValueError("pair_vector needs two distinct coordinates")
    return _pair_index(family)[(min(i, j), max(i, j))]


def induced_colouring(family: VectorFamily) -> dict[tuple[int, int, int], Colour]:
    m = family.m
    if m < 3:
        raise ValueError("the triple colouring needs m >= 3")
    v = _pair_index(family)
    return {
        (i, j, k): (v[i, j][k], v[i, k][j], v[j, k][i])
        for i, j, k in combinations(range(m), 3)
    }


def reconstruct_monochromatic(m: int, colour: Sequence[int]) -> VectorFamily:
    """The I(m, m-2) family whose induced colouring is constantly ``colour``.

    The result need not be admissible.
    """
    if m < 3:
        raise ValueError("reconstruction needs m >= 3")
    colour = parse_colour(colour)
    vectors = []
    for a, b in combinations(range(m), 2):
        entries = [0] * m
        for x in range(m):
            if x in (a, b):
                continue
            i, j, k = sorted((a, b, x))
            if (a, b) == (i, j):
                entries[x] = colour[0]
            elif (a, b) == (i, k):
                entries[x] = colour[1]
            else:
                entries[x] = colour[2]
        vectors.append(TernaryVector(tuple(entries)))
    return VectorFamily(m, vectors)


def monochromatic_frontier(colour: Sequence[int], m_max: int) -> int:
    """Largest m in [3, m_max] whose monochromatic reconstruction is admissible.

    Returns 2 if none is (never happens: every m = 3 reconstruction is a
    family of three weight-1 vectors).
    """
    if m_max < 3:
        raise ValueError("m_max must be at least 3")
    best = 2
    for m in range(3, m_max + 1):
        if find_clash(reconstruct_monochromatic(m, colour)) is None:
            best = m
    return best
