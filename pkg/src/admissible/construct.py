"""Closed-form admissible I(m, w) families.

Known constructions cover w in {1, 2, 3, m-1, m}:

* w = 1, 2, 3: every w-support carries the vector of type 1, 12 or 121.
* w = m-1: ``v(i)[j]`` is 1 for i < j, 2 for i > j, 0 at i = j.
* w = m: the single all-ones vector.
"""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .core import TernaryVector, VectorFamily

__all__ = ["typed_family", "construct_I", "supported_weights"]


def typed_family(m: int, t: Sequence[int]) -> VectorFamily:
    """One vector per ``len(t)``-subset, carrying ``t`` on its sorted coordinates."""
    t = tuple(t)
    if len(t) > m:
        raise ValueError(f"type of length {len(t)} does not fit in m={m}")
    if any(x not in (1, 2) for x in t):
        raise ValueError(f"type entries must be 1 or 2, got {t}")
    vectors = []
    for sup in combinations(range(m), len(t)):
        entries = [0] * m
        for coord, x in zip(sup, t):
            entries[coord] = x
        vectors.append(TernaryVector(tuple(entries)))
    return VectorFamily(m, vectors)


def supported_weights(m: int) -> list[int]:
    ws = {w for w in (1, 2, 3) if w <= m} | {m}
    if m >= 2:
        ws.add(m - 1)
    return sorted(ws)


def construct_I(m: int, w: int) -> VectorFamily:
    if m < 1 or not 0 < w <= m:
        raise ValueError(f"need 0 < w <= m, got m={m}, w={w}")
    if w == m:
        return VectorFamily(m, [(1,) * m])
    if w == m - 1:
        return VectorFamily(m, [
            tuple(1 if i < j else 2 if i > j else 0 for j in range(m)) for i in range(m)
        ])
    if w == 1:
        return typed_family(m, (1,))
    if w == 2:
        return typed_family(m, (1, 2))
    if w == 3:
        return typed_family(m, (1, 2, 1))
    raise ValueError(
        f"no closed-form I({m},{w}) construction; 4 <= w <= m-2 needs a search"
    )
