"""Exact search for admissible I(m, w) families and for f(m, w).

``exists_I`` looks for one vector on every ``w``-support with no clash;
``f_max`` maximises the number of weight-``w`` vectors in an admissible
family.  Both run the forward-checking engine in :mod:`admissible.engine`
and re-check every witness with the plain checkers in :mod:`admissible.core`
before returning it.

``export_cnf`` writes the existence question as DIMACS CNF for external SAT
solvers, and ``decode_model`` turns a solver model back into a family.
"""
from __future__ import annotations

import enum
import io
import re
from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import IO, Iterable, Mapping

from .core import VectorFamily, is_admissible, is_I_set
from .engine import Budget, ClashModel, run_exists, run_maximise

__all__ = [
    "SearchConfig",
    "SearchOutcome",
    "Status",
    "FMaxResult",
    "VarMap",
    "ModelError",
    "exists_I",
    "f_max",
    "cnf_clauses",
    "export_cnf",
    "read_varmap",
    "parse_model",
    "decode_model",
]


class Status(str, enum.Enum):
    FOUND = "Found"
    EXHAUSTED = "Exhausted"
    LIMIT_REACHED = "LimitReached"


@dataclass(frozen=True)
class SearchConfig:
    node_limit: int | None = None
    time_limit: float | None = None
    threads: int = 1
    star_symmetry: bool = True
    permutation_symmetry: bool = True
    seed_order: str = "colex"

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.seed_order not in ("colex", "lex"):
            raise ValueError(f"seed_order must be 'colex' or 'lex', got {self.seed_order!r}")

    def budget(self) -> Budget:
        return Budget(node_limit=self.node_limit, time_limit=self.time_limit)


@dataclass(frozen=True)
class SearchOutcome:
    status: Status
    witness: VectorFamily | None
    nodes: int
    elapsed: float

    def __post_init__(self):
        if (self.witness is not None) != (self.status is Status.FOUND):
            raise ValueError("a witness is present exactly when the status is Found")


@dataclass(frozen=True)
class FMaxResult:
    value: int
    witness: VectorFamily
    exact: bool
    nodes: int = 0
    elapsed: float = 0.0


def _initial_domains(model: ClashModel, cfg: SearchConfig) -> tuple[list[int], bool]:
    domains = [model.full_domain] * len(model.supports)
    star_pending = cfg.star_symmetry
    if cfg.permutation_symmetry:
        # Any support can be moved onto the first one, and that support's own
        # coordinates can then be permuted freely.
        domains[0] = model.canonical_choices(star=cfg.star_symmetry)
        star_pending = False
    return domains, star_pending


def _checked(family: VectorFamily, m: int, w: int, full: bool) -> VectorFamily:
    if full and not is_I_set(family, m, w):
        raise AssertionError(f"search produced a non-I({m},{w}) witness: {family}")
    if any(v.weight != w for v in family) or not is_admissible(family):
        raise AssertionError(f"search produced an inadmissible witness: {family}")
    return family


def exists_I(m: int, w: int, cfg: SearchConfig | None = None) -> SearchOutcome:
    cfg = cfg or SearchConfig()
    if not 0 < w <= m:
        raise ValueError(f"need 0 < w <= m, got m={m}, w={w}")
    model = ClashModel(m, w, cfg.seed_order)
    domains, star_pending = _initial_domains(model, cfg)
    budget = cfg.budget()
    status, assignment = run_exists(model, domains, budget,
                                    star_pending=star_pending, threads=cfg.threads)
    if status == "found":
        family = _checked(model.family(assignment), m, w, full=True)
        return SearchOutcome(Status.FOUND, family, budget.nodes, budget.elapsed)
    st = Status.EXHAUSTED if status == "exhausted" else Status.LIMIT_REACHED
    return SearchOutcome(st, None, budget.nodes, budget.elapsed)


def f_max(m: int, w: int, cfg: SearchConfig | None = None) -> FMaxResult:
    """Largest admissible family of weight-``w`` vectors in {0,1,2}^m.

    ``exact`` is False when a limit stopped the branch and bound; ``value``
    is then only a lower bound.
    """
    cfg = cfg or SearchConfig()
    if not 0 < w <= m:
        raise ValueError(f"need 0 < w <= m, got m={m}, w={w}")
    model = ClashModel(m, w, cfg.seed_order)
    domains, star_pending = _initial_domains(model, cfg)
    # Under coordinate permutations every non-empty family has a copy using
    # the first support, so that support may be required.
    forced = {0} if cfg.permutation_symmetry else set()
    budget = cfg.budget()
    best, exact = run_maximise(model, domains, budget, star_pending=star_pending,
                               forced=forced, threads=cfg.threads)
    if best.assignment is None:
        # Only possible when a limit struck before any leaf; one vector is always admissible.
        witness = model.family({0: 0})
        value = 1
    else:
        witness = model.family(best.assignment)
        value = best.value
    _checked(witness, m, w, full=False)
    if exact and value == comb(m, w):
        _checked(witness, m, w, full=True)
    return FMaxResult(value, witness, exact, budget.nodes, budget.elapsed)


# -- CNF ----------------------------------------------------------------------

class ModelError(ValueError):
    """A SAT model that cannot be decoded, or decodes to an invalid family."""


@dataclass(frozen=True)
class VarMap:
    """DIMACS variable ``v`` -> (support, coordinate); true means a 2 there."""

    m: int
    w: int
    entries: Mapping[int, tuple[tuple[int, ...], int]] = field(repr=False)

    @property
    def nvars(self) -> int:
        return len(self.entries)


_ENCODING_DOC = (
    "binary encoding: supports of size w are listed in colexicographic order;",
    "support number s (from 0) owns variables s*w+1 .. s*w+w;",
    "variable s*w+p+1 is true iff the p-th smallest coordinate of the support",
    "holds 2 (false: it holds 1); all other coordinates are 0.",
    "clauses: for every support triple that can clash, one clause per",
    "clashing joint value pattern on its twice-covered coordinates.",
)


def cnf_clauses(m: int, w: int) -> tuple[VarMap, list[list[int]]]:
    """Clauses whose models are exactly the admissible I(m, w) families."""
    if not 0 < w <= m:
        raise ValueError(f"need 0 < w <= m, got m={m}, w={w}")
    model = ClashModel(m, w, "colex")

    def var(s: int, coord: int) -> int:
        return s * w + model.positions[s].index(coord) + 1

    entries = {
        s * w + p + 1: (pos, coord)
        for s, pos in enumerate(model.positions) for p, coord in enumerate(pos)
    }
    clauses: list[list[int]] = []
    for i, j, l in model.clash_triples():
        sups = (model.supports[i], model.supports[j], model.supports[l])
        idx = (i, j, l)
        twice = []
        for coord in range(m):
            owners = [idx[k] for k in range(3) if (sups[k] >> coord) & 1]
            if len(owners) == 2:
                twice.append((var(owners[0], coord), var(owners[1], coord)))
        # A clash means equal values on every twice-covered coordinate.
        for pattern in product((False, True), repeat=len(twice)):
            clause = []
            for (x, y), two in zip(twice, pattern):
                clause += [-x, -y] if two else [x, y]
            clauses.append(clause)
    return VarMap(m, w, entries), clauses


def export_cnf(m: int, w: int, sink: IO) -> VarMap:
    varmap, clauses = cnf_clauses(m, w)
    buf = io.StringIO()
    buf.write(f"c admissible I(m,w) existence m={m} w={w}\n")
    for line in _ENCODING_DOC:
        buf.write(f"c {line}\n")
    for v, (pos, coord) in sorted(varmap.entries.items()):
        buf.write(f"c var {v} support {','.join(map(str, pos))} coord {coord}\n")
    buf.write(f"p cnf {varmap.nvars} {len(clauses)}\n")
    for clause in clauses:
        buf.write(" ".join(map(str, clause)) + " 0\n")
    text = buf.getvalue()
    if isinstance(sink, io.TextIOBase) or "b" not in getattr(sink, "mode", "b"):
        sink.write(text)
    else:
        sink.write(text.encode())
    return varmap


_HEADER = re.compile(r"^c admissible I\(m,w\) existence m=(\d+) w=(\d+)\s*$")
_VAR = re.compile(r"^c var (\d+) support ([\d,]+) coord (\d+)\s*$")


def read_varmap(text: str) -> VarMap:
    """Recover the variable map from the comment header of an exported CNF."""
    m = w = None
    entries = {}
    for line in text.splitlines():
        if not line.startswith("c"):
            if line.startswith("p"):
                break
            continue
        if (hit := _HEADER.match(line)):
            m, w = int(hit.group(1)), int(hit.group(2))
        elif (hit := _VAR.match(line)):
            pos = tuple(int(x) for x in hit.group(2).split(","))
            entries[int(hit.group(1))] = (pos, int(hit.group(3)))
    if m is None or not entries:
        raise ModelError("no admissible-set variable map found in CNF comments")
    if len(entries) != comb(m, w) * w:
        raise ModelError(f"variable map has {len(entries)} entries, expected {comb(m, w) * w}")
    return VarMap(m, w, entries)


def parse_model(text: str) -> list[int]:
    """Signed literals from solver output (``v`` lines) or bare integer lists."""
    lits = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("s"):
            if "UNSAT" in line.upper():
                raise ModelError("solver reported UNSATISFIABLE; there is no model to decode")
            continue
        if line.startswith("v"):
            line = line[1:]
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise ModelError(f"bad literal {tok!r}") from None
            if x:
                lits.append(x)
    return lits


def decode_model(model: Iterable[int] | Mapping[int, bool], varmap: VarMap,
                 verify: bool = True) -> VectorFamily:
    """Build the family a model describes.

    With ``verify`` the result must be an admissible I(m, w) family; a
    failure there means the encoding is broken and raises :class:`ModelError`.
    """
    if isinstance(model, Mapping):
        values = {int(k): bool(v) for k, v in model.items()}
    else:
        values = {}
        for lit in model:
            v, val = abs(lit), lit > 0
            if values.get(v, val) != val:
                raise ModelError(f"variable {v} is assigned both true and false")
            values[v] = val
    missing = [v for v in varmap.entries if v not in values]
    if missing:
        raise ModelError(f"model leaves {len(missing)} mapped variables unassigned (first: {min(missing)})")
    rows: dict[tuple[int, ...], list[int]] = {}
    for v, (pos, coord) in varmap.entries.items():
        row = rows.setdefault(pos, [0] * varmap.m)
        row[coord] = 2 if values[v] else 1
    family = VectorFamily(varmap.m, [tuple(r) for _, r in sorted(rows.items(), key=lambda kv: sorted(kv[0], reverse=True))])
    if verify and not (is_I_set(family, varmap.m, varmap.w) and is_admissible(family)):
        raise ModelError("decoded family is not an admissible I(m,w) set; the encoding is inconsistent")
    return family
