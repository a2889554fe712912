"""Valuation algebra: priority-count vectors, TOP, the maxdiff order and pointwise sum.

A finite valuation counts, for every priority of the game, how many vertices
of that priority a play visits before reaching the sink. TOP stands for a
play that never reaches the sink and sits above every finite valuation.

The solver itself works on whole tables of valuations held in numpy arrays
(:class:`ValuationTable`); :class:`Valuation` is the single-value view used
by the public API, the tests and debug output.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class Valuation:
    """A member of ``Vals ∪ {TOP}`` over a fixed sorted priority domain.

    ``counts is None`` encodes TOP.
    """

    domain: tuple[int, ...]
    counts: tuple[int, ...] | None

    def __post_init__(self):
        if self.counts is not None and len(self.counts) != len(self.domain):
            raise DomainError("count vector length differs from domain size")

    @classmethod
    def top(cls, domain: Sequence[int]) -> "Valuation":
        return cls(tuple(domain), None)

    @classmethod
    def zero(cls, domain: Sequence[int]) -> "Valuation":
        return cls(tuple(domain), (0,) * len(domain))

    @classmethod
    def of(cls, domain: Sequence[int], counts: Mapping[int, int]) -> "Valuation":
        """Build from a sparse ``{priority: count}`` mapping; missing priorities are 0."""
        domain = tuple(domain)
        bad = set(counts) - set(domain)
        if bad:
            raise DomainError(f"priorities {sorted(bad)} not in domain {list(domain)}")
        return cls(domain, tuple(int(counts.get(p, 0)) for p in domain))

    @property
    def is_top(self) -> bool:
        return self.counts is None

    def __getitem__(self, priority: int) -> int:
        if self.counts is None:
            raise TypeError("TOP has no counts")
        try:
            return self.counts[self.domain.index(priority)]
        except ValueError:
            raise DomainError(f"priority {priority} not in domain") from None

    def as_dict(self) -> dict[int, int] | None:
        if self.counts is None:
            return None
        return dict(zip(self.domain, self.counts))

    def __str__(self):
        if self.counts is None:
            return "TOP"
        return "{" + ", ".join(f"{p}:{c}" for p, c in zip(self.domain, self.counts)) + "}"

    def __lt__(self, other):
        return val_compare(self, other) is Ordering.LESS

    def __le__(self, other):
        return val_compare(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        return val_compare(self, other) is Ordering.GREATER

    def __ge__(self, other):
        return val_compare(self, other) is not Ordering.LESS

    def __add__(self, other):
        return val_add(self, other)


def _check_domains(a: Valuation, b: Valuation):
    if a.domain != b.domain:
        raise DomainError(f"valuation domains differ: {list(a.domain)} vs {list(b.domain)}")


def maxdiff(a: Valuation, b: Valuation) -> int | None:
    """Largest priority on which two finite valuations differ, or None if equal."""
    _check_domains(a, b)
    if a.counts is None or b.counts is None:
        raise TypeError("maxdiff is defined on finite valuations only")
    for p, x, y in zip(reversed(a.domain), reversed(a.counts), reversed(b.counts)):
        if x != y:
            return p
    return None


def val_compare(a: Valuation, b: Valuation) -> Ordering:
    """Total order on valuations; TOP is the unique maximum."""
    _check_domains(a, b)
    if a.counts is None:
        return Ordering.EQUAL if b.counts is None else Ordering.GREATER
    if b.counts is None:
        return Ordering.LESS
    p = maxdiff(a, b)
    if p is None:
        return Ordering.EQUAL
    x, y = a[p], b[p]
    if p % 2 == 0:
        return Ordering.LESS if x < y else Ordering.GREATER
    return Ordering.LESS if x > y else Ordering.GREATER


def val_add(a: Valuation, b: Valuation) -> Valuation:
    """Pointwise sum, with TOP absorbing."""
    _check_domains(a, b)
    if a.counts is None or b.counts is None:
        return Valuation.top(a.domain)
    return Valuation(a.domain, tuple(x + y for x, y in zip(a.counts, b.counts)))


def unit_val(domain: Sequence[int], priority: int, sign: int = 1) -> Valuation:
    """The vector with a single ``±1`` at ``priority``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    domain = tuple(domain)
    if priority not in domain:
        raise DomainError(f"priority {priority} not in domain {list(domain)}")
    return Valuation(domain, tuple(sign if p == priority else 0 for p in domain))


class ValuationTable:
    """Valuations of every vertex of an augmented game.

    ``counts`` has shape ``(vertices, |D|)``; ``top[v]`` marks TOP rows (their
    counts are meaningless).
    """

    __slots__ = ("domain", "counts", "top")

    def __init__(self, domain: Sequence[int], counts: np.ndarray, top: np.ndarray):
        self.domain = tuple(domain)
        self.counts = counts
        self.top = top

    def __len__(self):
        return len(self.top)

    def __getitem__(self, v: int) -> Valuation:
        if self.top[v]:
            return Valuation.top(self.domain)
        return Valuation(self.domain, tuple(int(c) for c in self.counts[v]))

    def __eq__(self, other):
        if not isinstance(other, ValuationTable):
            return NotImplemented
        if self.domain != other.domain or not np.array_equal(self.top, other.top):
            return False
        fin = ~self.top
        return np.array_equal(self.counts[fin], other.counts[fin])

    __hash__ = None

    def as_dict(self) -> dict[int, str]:
        return {v: str(self[v]) for v in range(len(self))}

    def __repr__(self):
        return f"ValuationTable({self.as_dict()})"


def compare_rows(domain: Sequence[int], a: ValuationTable, b: ValuationTable) -> np.ndarray:
    """Vectorised ``val_compare(a[v], b[v])`` for every row; returns -1/0/+1."""
    d = len(domain)
    sign = np.where(np.asarray(domain, dtype=np.int64) % 2 == 0, 1, -1)
    out = np.zeros(len(a.top), dtype=np.int8)
    if d:
        diff = (a.counts - b.counts) * sign
        nz = diff != 0
        has = nz.any(axis=1)
        last = d - 1 - np.argmax(nz[:, ::-1], axis=1)
        out[has] = np.sign(diff[has, last[has]])
    out[a.top & b.top] = 0
    out[a.top & ~b.top] = 1
    out[~a.top & b.top] = -1
    return out
