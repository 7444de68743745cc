"""Ternary vectors, clash predicates and admissibility checks.

A vector in {0,1,2}^m is stored as its entry tuple plus two bit-masks:
``nonzero`` (bit i set iff entry i != 0) and ``twos`` (bit i set iff entry
i == 2).  All clash tests work on the masks; the scalar per-coordinate
versions are kept alongside for differential testing.

Coordinates are 0-indexed.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence, TextIO

__all__ = [
    "TernaryVector",
    "VectorFamily",
    "ClashWitness",
    "FormatError",
    "support",
    "weight",
    "is_pair_clash",
    "is_triple_clash",
    "is_triple_clash_scalar",
    "is_triple_clash_distinct",
    "find_clash",
    "is_admissible",
    "is_I_set",
    "star",
    "star_family",
    "project",
    "read_family",
    "write_family",
    "parse_family",
    "format_family",
    "all_vectors",
    "colex_supports",
    "lex_supports",
]


class FormatError(ValueError):
    """Raised for malformed vectors, families or admissible-set files."""


@dataclass(frozen=True)
class TernaryVector:
    entries: tuple[int, ...]
    nonzero: int = field(init=False, repr=False, compare=False)
    twos: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        entries = tuple(int(x) for x in self.entries)
        if not entries:
            raise FormatError("a ternary vector needs at least one coordinate")
        nz = tw = 0
        for i, x in enumerate(entries):
            if x not in (0, 1, 2):
                raise FormatError(f"entry {x!r} at coordinate {i} is not in {{0,1,2}}")
            if x:
                nz |= 1 << i
                if x == 2:
                    tw |= 1 << i
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "nonzero", nz)
        object.__setattr__(self, "twos", tw)

    @classmethod
    def from_string(cls, s: str) -> "TernaryVector":
        s = s.strip()
        bad = set(s) - set("012")
        if bad:
            raise FormatError(f"characters {sorted(bad)} not in {{0,1,2}}: {s!r}")
        return cls(tuple(int(ch) for ch in s))

    @classmethod
    def from_masks(cls, m: int, nonzero: int, twos: int = 0) -> "TernaryVector":
        if twos & ~nonzero:
            raise ValueError("twos mask must be contained in the nonzero mask")
        return cls(tuple(
            0 if not (nonzero >> i) & 1 else (2 if (twos >> i) & 1 else 1)
            for i in range(m)
        ))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __str__(self) -> str:
        return "".join(map(str, self.entries))

    def __lt__(self, other: "TernaryVector") -> bool:
        return self.entries < other.entries

    @property
    def weight(self) -> int:
        return self.nonzero.bit_count()


def _vec(v: TernaryVector | str | Sequence[int]) -> TernaryVector:
    if isinstance(v, TernaryVector):
        return v
    if isinstance(v, str):
        return TernaryVector.from_string(v)
    return TernaryVector(tuple(v))


def _same_length(*vs: TernaryVector) -> None:
    n = len(vs[0])
    for v in vs[1:]:
        if len(v) != n:
            raise ValueError(f"length mismatch: {len(vs[0])} vs {len(v)}")


def support(v: TernaryVector | str | Sequence[int]) -> frozenset[int]:
    """Indices of the non-zero entries of ``v``."""
    v = _vec(v)
    return frozenset(i for i, x in enumerate(v.entries) if x)


def weight(v: TernaryVector | str | Sequence[int]) -> int:
    return _vec(v).weight


def is_pair_clash(u, v) -> bool:
    """True iff the supports of ``u`` and ``v`` are nested (equal supports count)."""
    u, v = _vec(u), _vec(v)
    _same_length(u, v)
    a, b = u.nonzero, v.nonzero
    return a & ~b == 0 or b & ~a == 0


def _witness_mask(a: TernaryVector, b: TernaryVector, c: TernaryVector) -> int:
    na, nb, nc = a.nonzero, b.nonzero, c.nonzero
    exactly_one = (na ^ nb ^ nc) & ~(na & nb & nc)
    ab = na & nb & ~nc
    ac = na & nc & ~nb
    bc = nb & nc & ~na
    differing = ((a.twos ^ b.twos) & ab) | ((a.twos ^ c.twos) & ac) | ((b.twos ^ c.twos) & bc)
    return exactly_one | differing


def is_triple_clash(a, b, c) -> bool:
    """True iff no coordinate separates the three vectors.

    A coordinate separates them when exactly one entry there is non-zero, or
    exactly two are non-zero and they differ.
    """
    a, b, c = _vec(a), _vec(b), _vec(c)
    _same_length(a, b, c)
    return _witness_mask(a, b, c) == 0


def is_triple_clash_scalar(a, b, c) -> bool:
    """Coordinate-by-coordinate reference for :func:`is_triple_clash`."""
    a, b, c = _vec(a), _vec(b), _vec(c)
    _same_length(a, b, c)
    for col in zip(a.entries, b.entries, c.entries):
        nz = [x for x in col if x]
        if len(nz) == 1:
            return False
        if len(nz) == 2 and nz[0] != nz[1]:
            return False
    return True


def is_triple_clash_distinct(a, b, c) -> bool:
    """Clash test phrased as: no coordinate with exactly one non-zero entry
    and no coordinate where all three entries are different."""
    a, b, c = _vec(a), _vec(b), _vec(c)
    _same_length(a, b, c)
    for col in zip(a.entries, b.entries, c.entries):
        if sum(1 for x in col if x) == 1:
            return False
        if len(set(col)) == 3:
            return False
    return True


@dataclass(frozen=True)
class ClashWitness:
    kind: str  # "pair" or "triple"
    members: tuple[TernaryVector, ...]
    indices: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind} clash: " + ", ".join(map(str, self.members))


class VectorFamily(Sequence[TernaryVector]):
    """An ordered collection of distinct ternary vectors of a common length."""

    __slots__ = ("m", "vectors", "_set")

    def __init__(self, m: int, vectors: Iterable[TernaryVector | str | Sequence[int]] = ()):
        if m < 1:
            raise FormatError("vector length must be positive")
        vs = tuple(_vec(v) for v in vectors)
        seen: set[TernaryVector] = set()
        for v in vs:
            if len(v) != m:
                raise FormatError(f"vector {v} has length {len(v)}, expected {m}")
            if v in seen:
                raise FormatError(f"duplicate vector {v}")
            seen.add(v)
        self.m = m
        self.vectors = vs
        self._set = frozenset(seen)

    @classmethod
    def of(cls, *vectors: str) -> "VectorFamily":
        if not vectors:
            raise ValueError("VectorFamily.of needs at least one vector; use VectorFamily(m)")
        return cls(len(vectors[0]), vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    def __contains__(self, v) -> bool:
        try:
            return _vec(v) in self._set
        except (FormatError, ValueError):
            return False

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorFamily):
            return NotImplemented
        return self.m == other.m and self._set == other._set

    def __hash__(self) -> int:
        return hash((self.m, self._set))

    def __repr__(self) -> str:
        return f"VectorFamily(m={self.m}, [{', '.join(map(str, self.vectors))}])"

    def sorted(self) -> "VectorFamily":
        return VectorFamily(self.m, sorted(self.vectors))


def _pair_clash_masks(a: int, b: int) -> bool:
    return a & ~b == 0 or b & ~a == 0


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def find_clash(family: VectorFamily | Iterable) -> ClashWitness | None:
    """Return the first pair clash, else the first triple clash, else None.

    Pairs come before triples and each is the lexicographically smallest
    index tuple of its kind.  Triples are found without scanning all of
    them: a clashing third vector must cover the symmetric difference of
    the first two supports and lie inside their union.
    """
    vs = list(family.vectors if isinstance(family, VectorFamily) else map(_vec, family))
    n = len(vs)
    if n > 1:
        _same_length(*vs)
    nz = [v.nonzero for v in vs]
    for i in range(n):
        for j in range(i + 1, n):
            if _pair_clash_masks(nz[i], nz[j]):
                return ClashWitness("pair", (vs[i], vs[j]), (i, j))
    by_support: dict[int, list[int]] = {}
    for k, mask in enumerate(nz):
        by_support.setdefault(mask, []).append(k)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = nz[i], nz[j]
            sym, common = a ^ b, a & b
            best = None
            for x in _submasks(common):
                for k in by_support.get(sym | x, ()):
                    if k > j and (best is None or k < best):
                        if _witness_mask(vs[i], vs[j], vs[k]) == 0:
                            best = k
            if best is not None:
                return ClashWitness("triple", (vs[i], vs[j], vs[best]), (i, j, best))
    return None


def is_admissible(family: VectorFamily | Iterable) -> bool:
    return find_clash(family) is None


def is_I_set(family: VectorFamily, m: int, w: int) -> bool:
    """True iff ``family`` holds exactly one weight-``w`` vector per ``w``-subset of [m]."""
    if not 0 <= w <= m:
        raise ValueError(f"need 0 <= w <= m, got m={m}, w={w}")
    vs = list(family)
    if any(len(v) != m for v in vs):
        return False
    if len(vs) != comb(m, w):
        return False
    supports = {v.nonzero for v in vs}
    return len(supports) == len(vs) and all(v.weight == w for v in vs)


def star(v) -> TernaryVector:
    """Swap the non-zero values 1 and 2."""
    v = _vec(v)
    return TernaryVector(tuple((3 - x) % 3 for x in v.entries))


def star_family(family: VectorFamily) -> VectorFamily:
    return VectorFamily(family.m, [star(v) for v in family])


def project(family: VectorFamily, coord: int, branch: str) -> VectorFamily:
    """Keep the vectors whose ``coord`` entry is zero (``branch="zero"``) or
    non-zero (``branch="nonzero"``) and delete that coordinate from them."""
    m = family.m
    if not 0 <= coord < m:
        raise IndexError(f"coordinate {coord} out of range for length {m}")
    if m < 2:
        raise ValueError("cannot delete the only coordinate")
    branch = branch.lower().replace("-", "").replace("_", "")
    if branch not in ("zero", "nonzero"):
        raise ValueError(f"branch must be 'zero' or 'nonzero', got {branch!r}")
    keep_zero = branch == "zero"
    out = []
    for v in family:
        if (v.entries[coord] == 0) == keep_zero:
            out.append(v.entries[:coord] + v.entries[coord + 1:])
    return VectorFamily(m - 1, out)


# -- file format --------------------------------------------------------------

def parse_family(text: str) -> VectorFamily:
    """Parse the admissible-set text format.

    Lines starting with ``#`` are comments.  The first other line is
    ``m <int>``; every following line is one vector of exactly m digits.
    Blank lines are ignored.
    """
    m = None
    vectors: list[TernaryVector] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if m is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "m" or not parts[1].isdigit():
                raise FormatError(f"line {lineno}: expected header 'm <integer>', got {line!r}")
            m = int(parts[1])
            if m < 1:
                raise FormatError(f"line {lineno}: m must be positive")
            continue
        if len(line) != m:
            raise FormatError(f"line {lineno}: vector {line!r} has length {len(line)}, expected {m}")
        try:
            vectors.append(TernaryVector.from_string(line))
        except FormatError as e:
            raise FormatError(f"line {lineno}: {e}") from None
    if m is None:
        raise FormatError("missing 'm <integer>' header")
    try:
        return VectorFamily(m, vectors)
    except FormatError as e:
        raise FormatError(str(e)) from None


def format_family(family: VectorFamily, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(f"m {family.m}\n")
    for v in family:
        buf.write(f"{v}\n")
    return buf.getvalue()


def read_family(fp: TextIO) -> VectorFamily:
    return parse_family(fp.read())


def write_family(family: VectorFamily, fp: TextIO, comments: Sequence[str] = ()) -> None:
    fp.write(format_family(family, comments))


def all_vectors(m: int, w: int | None = None) -> Iterator[TernaryVector]:
    """Every vector of length ``m`` (of weight ``w`` if given), supports in colex order."""
    for k in range(m + 1) if w is None else (w,):
        for sup in colex_supports(m, k):
            for twos in _submasks(sup):
                yield TernaryVector.from_masks(m, sup, twos)


def colex_supports(m: int, w: int) -> list[int]:
    """All ``w``-subsets of [m] as bit-masks in colexicographic order."""
    masks = [sum(1 << i for i in c) for c in combinations(range(m), w)]
    return sorted(masks)


def lex_supports(m: int, w: int) -> list[int]:
    return [sum(1 << i for i in c) for c in combinations(range(m), w)]
