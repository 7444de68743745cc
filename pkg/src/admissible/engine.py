"""Backtracking engine over one-vector-per-support assignments.

Every weight-``w`` support of [m] is a variable.  Its values ("choices") are
the ``2**w`` vectors on that support: bit ``p`` of a choice is set iff the
``p``-th smallest coordinate of the support carries a 2.  Choice 0 is the
all-ones vector.

Only some support triples can ever clash: every coordinate of their union
must be covered at least twice.  For those triples, two assigned vectors
pin the clashing vectors on the third support to a sub-cube, which forward
checking removes from that support's domain.  A full assignment surviving
forward checking is therefore clash free.
"""
from __future__ import annotations

import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .core import TernaryVector, VectorFamily, colex_supports, lex_supports


class LimitReached(Exception):
    """Raised inside a search when a node or time limit is hit."""


class _Stop(Exception):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ClashModel:
    """Support-level clash structure for weight-``w`` vectors in {0,1,2}^m."""

    def __init__(self, m: int, w: int, order: str = "colex"):
        if not 0 < w <= m:
            raise ValueError(f"need 0 < w <= m, got m={m}, w={w}")
        if order not in ("colex", "lex"):
            raise ValueError(f"unknown support order {order!r}")
        self.m, self.w = m, w
        self.order = order
        self.supports = colex_supports(m, w) if order == "colex" else lex_supports(m, w)
        self.index = {s: i for i, s in enumerate(self.supports)}
        self.positions = [tuple(i for i in range(m) if (s >> i) & 1) for s in self.supports]
        self.nchoices = 1 << w
        self.full_domain = (1 << self.nchoices) - 1
        self.twos = [
            [self._spread(pos, c) for c in range(self.nchoices)] for pos in self.positions
        ]
        # partners[k][j] = [(l, agree_mask, fixed_mask), ...] for every
        # potentially clashing triple {k, j, l}.
        self.partners: list[dict[int, list[tuple[int, int, int]]]] = [
            {} for _ in self.supports
        ]
        self._build_partners()
        self._forbidden = lru_cache(maxsize=None)(self._forbidden_uncached)

    @staticmethod
    def _spread(pos: tuple[int, ...], c: int) -> int:
        out = 0
        for p, coord in enumerate(pos):
            if (c >> p) & 1:
                out |= 1 << coord
        return out

    def _local(self, l: int, mask: int) -> int:
        out = 0
        for p, coord in enumerate(self.positions[l]):
            if (mask >> coord) & 1:
                out |= 1 << p
        return out

    def _build_partners(self) -> None:
        sups, index, w = self.supports, self.index, self.w
        for i, a in enumerate(sups):
            for j in range(i + 1, len(sups)):
                b = sups[j]
                sym, common = a ^ b, a & b
                need = w - sym.bit_count()
                if need < 0:
                    continue
                for x in _submasks_of_size(common, need):
                    l = index[sym | x]
                    if l == i or l == j:
                        continue
                    c = sups[l]
                    for (p, q, r) in ((i, j, l), (j, i, l)):
                        sp, sq = sups[p], sups[q]
                        self.partners[p].setdefault(q, []).append(
                            (r, sp & sq & ~c, c & ~(sp & sq))
                        )

    def clash_triples(self):
        """Yield each potentially clashing support triple ``(i, j, l)``, ``i<j<l``, once."""
        for i, part in enumerate(self.partners):
            for j, lst in part.items():
                if j <= i:
                    continue
                for l, _, _ in lst:
                    if l > j:
                        yield i, j, l

    def _forbidden_uncached(self, l: int, fixed: int, target: int) -> int:
        fl, tl = self._local(l, fixed), self._local(l, target)
        out = 0
        for c in range(self.nchoices):
            if c & fl == tl:
                out |= 1 << c
        return out

    def forbidden(self, k: int, ck: int, j: int, cj: int, l: int, agree: int, fixed: int) -> int:
        """Choices on support ``l`` that clash with choice ``ck`` on ``k`` and ``cj`` on ``j``."""
        tk, tj = self.twos[k][ck], self.twos[j][cj]
        if (tk ^ tj) & agree:
            return 0
        return self._forbidden(l, fixed, (tk | tj) & fixed)

    def vector(self, i: int, c: int) -> TernaryVector:
        return TernaryVector.from_masks(self.m, self.supports[i], self.twos[i][c])

    def choice_of(self, v: TernaryVector) -> tuple[int, int]:
        i = self.index[v.nonzero]
        return i, self._local(i, v.twos)

    def family(self, assignment: dict[int, int] | list) -> VectorFamily:
        items = assignment.items() if isinstance(assignment, dict) else enumerate(assignment)
        return VectorFamily(self.m, [self.vector(i, c) for i, c in sorted(items) if c is not None])

    def star_choices(self) -> int:
        """Domain mask of choices whose first non-zero entry is 1."""
        return sum(1 << c for c in range(0, self.nchoices, 2))

    def canonical_choices(self, star: bool) -> int:
        """Sorted vectors 1..12..2; with ``star`` at most half the entries are 2."""
        w = self.w
        top = w // 2 if star else w
        out = 0
        for k in range(top + 1):
            # k twos on the last k positions
            c = ((1 << k) - 1) << (w - k)
            out |= 1 << c
        return out


def _submasks_of_size(mask: int, size: int):
    bits = [1 << b for b in _bits(mask)]
    if size > len(bits):
        return
    for combo in combinations(bits, size):
        yield sum(combo)


@dataclass
class Budget:
    """Shared node/time budget and stop flag for one search."""

    node_limit: int | None = None
    time_limit: float | None = None
    nodes: int = 0
    start: float = field(default_factory=time.monotonic)
    stop: threading.Event = field(default_factory=threading.Event)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def charge(self, n: int) -> None:
        with self.lock:
            self.nodes += n
            over = self.node_limit is not None and self.nodes >= self.node_limit
        if over:
            raise LimitReached
        if self.time_limit is not None and time.monotonic() - self.start >= self.time_limit:
            raise LimitReached

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.start


class Solver:
    """Depth-first search with forward checking and smallest-domain-first ordering.

    ``domains[i]`` is the bit-mask of allowed choices on support ``i``.
    """

    _BATCH = 256

    def __init__(self, model: ClashModel, domains: list[int], budget: Budget,
                 star_pending: bool = False, forced: set[int] | None = None):
        self.model = model
        self.dom = list(domains)
        self.assigned: list[int | None] = [None] * len(domains)
        self.done = [False] * len(domains)
        self.budget = budget
        self.star_pending = star_pending
        self.star_mask = model.star_choices()
        self.forced = forced or set()
        self.trail: list[tuple[int, int]] = []
        self._pending_nodes = 0
        limit = budget.node_limit
        self._batch = self._BATCH if limit is None else max(1, min(self._BATCH, limit // 64))

    # -- bookkeeping ----------------------------------------------------------

    def _tick(self) -> None:
        self._pending_nodes += 1
        if self._pending_nodes >= self._batch:
            self.flush()
        if self.budget.stop.is_set():
            raise _Stop

    def settle(self) -> None:
        """Record pending nodes without enforcing limits."""
        n, self._pending_nodes = self._pending_nodes, 0
        with self.budget.lock:
            self.budget.nodes += n

    def flush(self) -> None:
        n, self._pending_nodes = self._pending_nodes, 0
        if n:
            self.budget.charge(n)

    def assign(self, k: int, c: int) -> bool:
        """Place choice ``c`` on support ``k``; False if some domain empties."""
        self.assigned[k] = c
        self.done[k] = True
        model, dom, assigned, done, trail = self.model, self.dom, self.assigned, self.done, self.trail
        for j, triples in model.partners[k].items():
            cj = assigned[j]
            if cj is None:
                continue
            for l, agree, fixed in triples:
                if done[l]:
                    continue
                forb = model.forbidden(k, c, j, cj, l, agree, fixed)
                if dom[l] & forb:
                    trail.append((l, dom[l]))
                    dom[l] &= ~forb
                    if not dom[l] and (self._no_skip or l in self.forced):
                        return False
        return True

    # False while maximising: an emptied domain just means that support stays empty.
    _no_skip = True

    def undo(self, mark: int, k: int) -> None:
        trail, dom = self.trail, self.dom
        while len(trail) > mark:
            l, old = trail.pop()
            dom[l] = old
        self.assigned[k] = None
        self.done[k] = False

    def select(self) -> int | None:
        best, best_size = None, None
        for i, d in enumerate(self.dom):
            if self.done[i] or not d:
                continue
            size = d.bit_count()
            if best is None or size < best_size:
                best, best_size = i, size
                if size == 1:
                    break
        return best

    def choices(self, k: int) -> int:
        d = self.dom[k]
        if self.star_pending:
            d &= self.star_mask
        return d

    # -- existence --------------------------------------------------------------

    def exists(self) -> dict[int, int] | None:
        if any(not d for d in self.dom):
            return None
        return self._exists()

    def _exists(self) -> dict[int, int] | None:
        k = self.select()
        if k is None:
            return {i: c for i, c in enumerate(self.assigned)}
        pending = self.star_pending
        for c in _bits(self.choices(k)):
            self._tick()
            mark = len(self.trail)
            self.star_pending = False
            if self.assign(k, c):
                found = self._exists()
                if found is not None:
                    return found
            self.undo(mark, k)
            self.star_pending = pending
        return None

    # -- maximisation -------------------------------------------------------------

    def maximise(self, shared: "BestBound") -> None:
        self._no_skip = False
        self._placed = sum(1 for c in self.assigned if c is not None)
        self._maximise(shared)

    def _upper(self) -> int:
        return self._placed + sum(
            1 for i, d in enumerate(self.dom) if not self.done[i] and d
        )

    def _maximise(self, shared: "BestBound") -> None:
        if self._upper() <= shared.value:
            return
        k = self.select()
        if k is None:
            shared.offer(self._placed, {i: c for i, c in enumerate(self.assigned) if c is not None})
            if shared.value >= shared.ceiling:
                raise _Stop
            return
        pending = self.star_pending
        for c in _bits(self.choices(k)):
            self._tick()
            mark = len(self.trail)
            self.star_pending = False
            if self.assign(k, c):
                self._placed += 1
                self._maximise(shared)
                self._placed -= 1
            self.undo(mark, k)
            self.star_pending = pending
        if k not in self.forced:
            self._tick()
            self.done[k] = True
            self._maximise(shared)
            self.done[k] = False


class BestBound:
    """Monotone shared incumbent for branch and bound."""

    def __init__(self, ceiling: int, value: int = 0):
        self.ceiling = ceiling
        self.value = value
        self.assignment: dict[int, int] | None = None
        self._lock = threading.Lock()

    def offer(self, value: int, assignment: dict[int, int]) -> None:
        with self._lock:
            if value > self.value or self.assignment is None and value >= self.value:
                self.value = value
                self.assignment = dict(assignment)


def _ensure_recursion(depth: int) -> None:
    need = 4 * depth + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def _top_split(model: ClashModel, domains: list[int], star_pending: bool,
               forced: set[int]) -> tuple[int | None, list[int]]:
    probe = Solver(model, domains, Budget(), star_pending, forced)
    k = probe.select()
    if k is None:
        return None, []
    return k, list(_bits(probe.choices(k)))


def run_exists(model: ClashModel, domains: list[int], budget: Budget, *,
               star_pending: bool = False, threads: int = 1) -> tuple[str, dict[int, int] | None]:
    """Return ``("found", assignment)``, ``("exhausted", None)`` or ``("limit", None)``."""
    _ensure_recursion(len(domains))
    if threads <= 1:
        solver = Solver(model, domains, budget, star_pending)
        try:
            found = solver.exists()
        except LimitReached:
            return "limit", None
        finally:
            solver.settle()
        return ("found", found) if found is not None else ("exhausted", None)

    k, top = _top_split(model, domains, star_pending, set())
    if k is None:
        return run_exists(model, domains, budget, star_pending=star_pending, threads=1)
    result: dict = {}
    limit_hit = threading.Event()

    def work(c: int) -> None:
        solver = Solver(model, domains, budget, False)
        try:
            solver._tick()
            if not solver.assign(k, c):
                return
            found = solver._exists()
        except LimitReached:
            limit_hit.set()
            budget.stop.set()
            return
        except _Stop:
            return
        finally:
            solver.settle()
        if found is not None:
            result.setdefault("found", found)
            budget.stop.set()

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(work, top))
    if "found" in result:
        return "found", result["found"]
    if limit_hit.is_set():
        return "limit", None
    return "exhausted", None


def run_maximise(model: ClashModel, domains: list[int], budget: Budget, *,
                 star_pending: bool = False, forced: set[int] | None = None,
                 threads: int = 1) -> tuple[BestBound, bool]:
    """Branch and bound on the number of placed vectors; returns (incumbent, exact)."""
    _ensure_recursion(len(domains))
    forced = forced or set()
    shared = BestBound(ceiling=sum(1 for d in domains if d))
    if threads <= 1:
        solver = Solver(model, domains, budget, star_pending, forced)
        try:
            solver.maximise(shared)
        except _Stop:
            pass
        except LimitReached:
            return shared, False
        finally:
            solver.settle()
        return shared, True

    k, top = _top_split(model, domains, star_pending, forced)
    if k is None:
        return run_maximise(model, domains, budget, star_pending=star_pending,
                            forced=forced, threads=1)
    limit_hit = threading.Event()
    branches: list[int | None] = list(top) + ([None] if k not in forced else [])

    def work(c: int | None) -> None:
        solver = Solver(model, domains, budget, star_pending if c is None else False, forced)
        solver._no_skip = False
        try:
            solver._tick()
            if c is None:
                solver.done[k] = True
                solver._placed = 0
            else:
                if not solver.assign(k, c):
                    return
                solver._placed = 1
            solver._maximise(shared)
        except LimitReached:
            limit_hit.set()
            budget.stop.set()
        except _Stop:
            if shared.value >= shared.ceiling:
                budget.stop.set()
        finally:
            solver.settle()

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(work, branches))
    return shared, not limit_hit.is_set()
