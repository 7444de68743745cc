"""Types of ternary vectors and typed clashes.

The type of a vector is the sequence of its non-zero entries in coordinate
order.  A vector *has* type ``t`` when ``t`` is a prefix of that sequence.
Three supports form a type-``t`` clash when every choice of type-``t``
vectors on them is a triple clash; if that happens inside C([m], w), no
admissible I(m, w) family can consist of type-``t`` vectors only.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .bruteforce import BudgetExceeded
from .core import TernaryVector, VectorFamily, _vec, is_admissible, is_I_set, is_triple_clash
from .engine import Budget, ClashModel, run_exists

__all__ = [
    "TYPE_CLASSES_4",
    "BudgetExceeded",
    "MonotypeResult",
    "parse_type",
    "format_type",
    "full_type",
    "has_type",
    "classify4",
    "enumerate_typed",
    "is_typed_clash",
    "is_typed_clash_bruteforce",
    "star_type",
    "monotype_I_exists",
]

TypeSeq = tuple[int, ...]

# Prefix-free code covering every {1,2}-sequence of length >= 4.
TYPE_CLASSES_4: tuple[TypeSeq, ...] = (
    (1, 1), (1, 2, 2), (1, 2, 1, 1), (1, 2, 1, 2),
    (2, 1, 1), (2, 2), (2, 1, 2, 2), (2, 1, 2, 1),
)


def parse_type(s: str | Sequence[int]) -> TypeSeq:
    if isinstance(s, str):
        if set(s) - set("12"):
            raise ValueError(f"a type is a string over {{1,2}}, got {s!r}")
        return tuple(int(ch) for ch in s)
    t = tuple(int(x) for x in s)
    if any(x not in (1, 2) for x in t):
        raise ValueError(f"type entries must be 1 or 2, got {t}")
    return t


def format_type(t: Sequence[int]) -> str:
    return "".join(map(str, t))


def _support_tuple(S: Iterable[int], m: int) -> tuple[int, ...]:
    s = tuple(sorted(set(int(i) for i in S)))
    if s and (s[0] < 0 or s[-1] >= m):
        raise ValueError(f"support {s} not inside [0, {m})")
    return s


def full_type(v) -> TypeSeq:
    return tuple(x for x in _vec(v).entries if x)


def has_type(v, t: Sequence[int]) -> bool:
    ft = full_type(v)
    t = tuple(t)
    return len(ft) >= len(t) and ft[: len(t)] == t


def classify4(v) -> TypeSeq:
    """The class in :data:`TYPE_CLASSES_4` that is a prefix of the type of ``v``."""
    ft = full_type(v)
    if len(ft) < 4:
        raise ValueError(f"classify4 needs weight >= 4, {_vec(v)} has weight {len(ft)}")
    matches = [c for c in TYPE_CLASSES_4 if ft[: len(c)] == c]
    assert len(matches) == 1, matches
    return matches[0]


def star_type(t: Sequence[int]) -> TypeSeq:
    return tuple(3 - x for x in t)


def enumerate_typed(S: Iterable[int], t: Sequence[int], m: int) -> list[TernaryVector]:
    """All vectors of length ``m`` with support exactly ``S`` and type ``t``."""
    s = _support_tuple(S, m)
    t = tuple(t)
    if len(t) > len(s):
        raise ValueError(f"type {format_type(t)} is longer than support {s}")
    out = []
    for tail in product((1, 2), repeat=len(s) - len(t)):
        entries = [0] * m
        for coord, x in zip(s, t + tail):
            entries[coord] = x
        out.append(TernaryVector(tuple(entries)))
    return out


def is_typed_clash(S1: Iterable[int], S2: Iterable[int], S3: Iterable[int],
                   t: Sequence[int], m: int) -> bool:
    """Decide a type-``t`` clash coordinate by coordinate, without enumeration.

    A coordinate covered by exactly one support always separates some
    completion.  One covered by exactly two separates some completion unless
    both entries there are fixed by ``t`` and equal.
    """
    t = tuple(t)
    sups = [_support_tuple(S, m) for S in (S1, S2, S3)]
    if any(len(t) > len(s) for s in sups):
        raise ValueError(f"type {format_type(t)} is longer than one of the supports")
    fixed = [dict(zip(s, t)) for s in sups]
    for i in range(m):
        owners = [k for k, s in enumerate(sups) if i in s]
        if len(owners) == 1:
            return False
        if len(owners) == 2:
            a, b = owners
            if i not in fixed[a] or i not in fixed[b] or fixed[a][i] != fixed[b][i]:
                return False
    return True


def is_typed_clash_bruteforce(S1, S2, S3, t: Sequence[int], m: int,
                              budget: int = 1 << 20) -> bool:
    """Check every triple of type-``t`` vectors on the three supports."""
    t = tuple(t)
    sups = [_support_tuple(S, m) for S in (S1, S2, S3)]
    size = 1
    for s in sups:
        if len(t) > len(s):
            raise ValueError(f"type {format_type(t)} is longer than support {s}")
        size *= 2 ** (len(s) - len(t))
    if size > budget:
        raise BudgetExceeded(f"{size} completions exceed budget {budget}")
    A, B, C = (enumerate_typed(s, t, m) for s in sups)
    return all(is_triple_clash(a, b, c) for a in A for b in B for c in C)


@dataclass(frozen=True)
class MonotypeResult:
    exists: bool
    witness: VectorFamily | None = None
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.exists


def monotype_I_exists(m: int, w: int, t: Sequence[int], *,
                      node_limit: int | None = 10_000_000,
                      time_limit: float | None = None) -> MonotypeResult:
    """Search for an admissible I(m, w) family whose vectors all have type ``t``.

    Raises :class:`BudgetExceeded` when a limit stops the search before it
    could decide; that is never reported as non-existence.
    """
    t = parse_type(t)
    if not len(t) <= w <= m or w < 1:
        raise ValueError(f"need |t| <= w <= m, got |t|={len(t)}, w={w}, m={m}")
    model = ClashModel(m, w)
    prefix = sum(1 << p for p, x in enumerate(t) if x == 2)
    low = (1 << len(t)) - 1
    typed = sum(1 << c for c in range(model.nchoices) if c & low == prefix)
    budget = Budget(node_limit=node_limit, time_limit=time_limit)
    status, assignment = run_exists(model, [typed] * len(model.supports), budget)
    if status == "limit":
        raise BudgetExceeded(f"monotype search for ({m},{w},{format_type(t)}) hit its limit")
    if status == "exhausted":
        return MonotypeResult(False, None, budget.nodes)
    family = model.family(assignment)
    assert all(has_type(v, t) for v in family)
    assert is_I_set(family, m, w) and is_admissible(family)
    return MonotypeResult(True, family, budget.nodes)
