"""Cap-set sizes obtained from admissible families.

An admissible family in {0,1,2}^m with ``f`` vectors of weight ``w`` gives a
cap set in F_3^(36m) of size ``f * (72 * 112**5)**(m - w) * (112**6)**w``.
Taking products of that cap set yields cap sets of size roughly
``base**n`` in F_3^n, where ``base = size**(1/(36m))``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

from mpmath import iv, mp, mpf, nstr

__all__ = [
    "RAMSEY_C1",
    "RAMSEY_C2",
    "BoundReport",
    "capset_count",
    "capset_base",
    "bound_report",
]

# Named only; nobody knows their values.
RAMSEY_C1 = "R^(4)(5,5,5,5,5,5,6,6)"
RAMSEY_C2 = "R^(3)(4,4,4,4,4,4,6,6)"

_IV_LOCK = threading.Lock()
_NON_SUPPORT_FACTOR = 72 * 112**5
_SUPPORT_FACTOR = 112**6


def _check(f: int, m: int, w: int) -> None:
    if f < 1:
        raise ValueError(f"f must be at least 1, got {f}")
    if not 0 < w <= m:
        raise ValueError(f"need 0 < w <= m, got m={m}, w={w}")


def capset_count(f: int, m: int, w: int) -> int:
    """Exact size of the cap set in F_3^(36m)."""
    _check(f, m, w)
    return f * _NON_SUPPORT_FACTOR ** (m - w) * _SUPPORT_FACTOR**w


def capset_base(f: int, m: int, w: int, precision_bits: int = 64) -> tuple[mpf, mpf]:
    """``count ** (1/(36m))`` and a rigorous bound on its error.

    Evaluated as ``exp(log(count) / (36m))`` in interval arithmetic; the
    returned value is the interval midpoint and the error is its half-width,
    which is kept below ``2**(8 - precision_bits)``.
    """
    _check(f, m, w)
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    count = capset_count(f, m, w)
    target = mpf(2) ** (8 - precision_bits)
    guard = 16
    while True:
        # the interval context has no workprec(); its precision is global state
        with _IV_LOCK:
            saved = iv.prec
            iv.prec = precision_bits + guard
            try:
                enclosure = iv.exp(iv.log(iv.mpf(count)) / (36 * m))
            finally:
                iv.prec = saved
        with mp.workprec(precision_bits + guard):
            lo, hi = mpf(enclosure.a), mpf(enclosure.b)
            mid = (lo + hi) / 2
            # half-width plus the rounding of the midpoint itself
            err = (hi - lo) / 2 + abs(mid) * mpf(2) ** (1 - precision_bits - guard)
            if err <= target:
                return +mid, +err
        guard *= 2


@dataclass(frozen=True)
class BoundReport:
    f: int
    m: int
    w: int
    count: int
    dimension: int
    base: mpf
    error: mpf

    def text(self) -> str:
        return (
            f"admissible family: f={self.f} vectors of weight {self.w} in {{0,1,2}}^{self.m}\n"
            f"cap set in F_3^{self.dimension} of size {self.count}\n"
            f"growth base {nstr(self.base, 20)} (+/- {nstr(self.error, 3)})\n"
            f"cap sets of size at least ({nstr(self.base, 5)} - eps)^n for large n\n"
        )

    def key_values(self) -> str:
        return "\n".join([
            f"f={self.f}",
            f"m={self.m}",
            f"w={self.w}",
            f"dimension={self.dimension}",
            f"count={self.count}",
            f"base={nstr(self.base, 30)}",
            f"base_error={nstr(self.error, 5)}",
            f"ramsey_C1={RAMSEY_C1}",
            f"ramsey_C2={RAMSEY_C2}",
        ]) + "\n"


def bound_report(f: int, m: int, w: int, precision_bits: int = 64) -> BoundReport:
    base, err = capset_base(f, m, w, precision_bits)
    return BoundReport(f, m, w, capset_count(f, m, w), 36 * m, base, err)
