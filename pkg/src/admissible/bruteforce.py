"""Pure product-enumeration oracles.

These deliberately avoid the search engine: every one-vector-per-support
assignment is enumerated as a cell of a dense numpy grid and clash tables
are built with the scalar clash predicate.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .core import TernaryVector, is_pair_clash, is_triple_clash_scalar


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the allowed budget."""


def _supports(m: int, w: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), w))


def _vectors_on(m: int, sup: tuple[int, ...]) -> list[TernaryVector]:
    out = []
    for c in range(1 << len(sup)):
        entries = [0] * m
        for p, coord in enumerate(sup):
            entries[coord] = 2 if (c >> p) & 1 else 1
        out.append(TernaryVector(tuple(entries)))
    return out


@lru_cache(maxsize=16)
def admissible_grid(m: int, w: int, budget: int = 1 << 24) -> np.ndarray:
    """Boolean array, one axis per ``w``-support (lex order), one cell per
    assignment; True where the assignment is an admissible family.

    Along each axis, index ``c`` is the vector with 2s at the support
    positions given by the bits of ``c``.
    """
    sups = _supports(m, w)
    d = 1 << w
    if d ** len(sups) > budget:
        raise BudgetExceeded(f"{d}^{len(sups)} assignments exceed budget {budget}")
    n = len(sups)
    cands = [_vectors_on(m, s) for s in sups]
    grid = np.ones((d,) * n, dtype=bool)
    for i, j in combinations(range(n), 2):
        table = np.array([[is_pair_clash(a, b) for b in cands[j]] for a in cands[i]])
        shape = [1] * n
        shape[i] = shape[j] = d
        grid &= ~table.reshape(shape)
    for i, j, k in combinations(range(n), 3):
        table = np.array([
            [[is_triple_clash_scalar(a, b, c) for c in cands[k]] for b in cands[j]]
            for a in cands[i]
        ])
        shape = [1] * n
        shape[i] = shape[j] = shape[k] = d
        grid &= ~table.reshape(shape)
    grid.setflags(write=False)
    return grid


def exists_I_bruteforce(m: int, w: int, budget: int = 1 << 24) -> bool:
    return bool(admissible_grid(m, w, budget).any())


def monotype_bruteforce(m: int, w: int, t: tuple[int, ...], budget: int = 1 << 24) -> bool:
    """Is there an admissible I(m, w) family all of whose vectors have type ``t``?"""
    grid = admissible_grid(m, w, budget)
    d = 1 << w
    typed = np.array([
        all(((c >> p) & 1) == (t[p] == 2) for p in range(len(t))) for c in range(d)
    ])
    idx = np.flatnonzero(typed)
    sub = grid[np.ix_(*([idx] * grid.ndim))]
    return bool(sub.any())


def f_max_bruteforce(m: int, w: int, limit: int = 1 << 22) -> int:
    """Largest admissible family of weight-``w`` vectors, by exhaustive enumeration.

    Each support holds nothing or one of its vectors, so there are
    ``(2**w + 1) ** C(m, w)`` candidate families.
    """
    sups = _supports(m, w)
    cands = [[None] + _vectors_on(m, s) for s in sups]
    total = 1
    for c in cands:
        total *= len(c)
    if total > limit:
        raise BudgetExceeded(f"{total} candidate families exceed budget {limit}")
    best = 0

    def rec(i: int, chosen: list[TernaryVector]) -> None:
        nonlocal best
        if len(chosen) + (len(sups) - i) <= best:
            return
        if i == len(sups):
            best = len(chosen)
            return
        for v in cands[i]:
            if v is None:
                rec(i + 1, chosen)
                continue
            if any(is_pair_clash(v, u) for u in chosen):
                continue
            if any(is_triple_clash_scalar(v, a, b) for a, b in combinations(chosen, 2)):
                continue
            chosen.append(v)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return best
