"""Valuation computation: sequential tree walk and the parallel Euler-tour pipeline.

The strategy-restricted graph has one outgoing edge per vertex, so it is a
pseudoforest: a tree hanging off the sink plus trees hanging off cycles.
Doubling every tree edge into a *down* and an *up* element and following an
Euler tour turns the sink tree into one linked list. With weight ``+pri(v)``
on ``down(v)`` and ``-pri(v)`` on ``up(v)``, the exclusive prefix sum at
``up(v)`` counts exactly the priorities on the path from ``v`` to the sink.
Every other component becomes a pair of cycles, whose elements are marked TOP.

Element ids: ``up(v) = v`` and ``down(v) = v + n`` for the ``n`` non-sink
vertices; the sink owns no elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._parallel import run_chunks
from .valuation import Valuation, ValuationTable

END = -1
EMPTY = -2

# Below this many list elements the parallel pipeline only adds overhead.
MIN_PARALLEL_ELEMENTS = 4096


def _choice_of(sp) -> np.ndarray:
    choice = getattr(sp, "choice", sp)
    return np.ascontiguousarray(choice, dtype=np.int64)


def compute_valuation_seq(game, sp) -> ValuationTable:
    """Valuations of every vertex under the strategy pair ``sp``.

    Vertices with a strategy path to the sink count the priorities on that
    path (their own included); all others are TOP. The sink is zero.
    """
    choice = _choice_of(sp)
    counts, top = _kernels.impl.valuation_seq(choice, game.pri_idx, len(game.domain))
    return ValuationTable(game.domain, counts, top.astype(bool))


@dataclass
class EulerList:
    """Linked list of up/down elements with signed unit weights.

    ``suc[e]`` is the next element or ``END``; ``head`` is the first element
    of the sink's tour or ``EMPTY`` when no vertex reaches the sink. The
    weight of ``e`` is ``w_sign[e]`` at domain rank ``w_idx[e]``.
    """

    suc: np.ndarray
    head: int
    w_idx: np.ndarray
    w_sign: np.ndarray
    domain: tuple

    @property
    def m(self) -> int:
        return len(self.suc)

    @property
    def n(self) -> int:
        return self.m // 2

    def weight(self, e: int) -> Valuation:
        counts = [0] * len(self.domain)
        counts[self.w_idx[e]] = int(self.w_sign[e])
        return Valuation(self.domain, tuple(counts))

    def chain(self) -> list[int]:
        """Elements reachable from ``head`` in list order."""
        out = []
        e = self.head
        while e not in (END, EMPTY) and len(out) <= self.m:
            out.append(int(e))
            e = int(self.suc[e])
        return out


@dataclass
class RankResult:
    """Exclusive prefix sums per element; ``top[e]`` is the TOP mark."""

    counts: np.ndarray
    top: np.ndarray
    domain: tuple

    def __getitem__(self, e: int) -> Valuation:
        if self.top[e]:
            return Valuation.top(self.domain)
        return Valuation(self.domain, tuple(int(c) for c in self.counts[e]))


def build_euler_list(game, sp, workers: int = 1) -> EulerList:
    """Link the up/down elements of the strategy pseudoforest into Euler tours.

    Each vertex splices its own (down, up) pair into its parent's chain by
    atomically swapping the parent's ``start`` slot; afterwards every chain is
    closed onto its owner's up element. With one worker the splices happen in
    ascending vertex order. Any interleaving yields a valid tour.
    """
    n = game.n
    choice = _choice_of(sp)
    start = np.empty(n + 1, dtype=np.int64)
    start[:n] = np.arange(n, 2 * n)
    start[n] = EMPTY
    suc = np.full(2 * n, END, dtype=np.int64)
    head = np.array([EMPTY], dtype=np.int64)
    k = _kernels.impl
    run_chunks(lambda lo, hi: k.euler_splice(choice, start, suc, head, lo, hi), n, workers, 1024)
    run_chunks(lambda lo, hi: k.euler_join(start, suc, lo, hi), n, workers, 1024)
    if start[n] != EMPTY:
        suc[start[n]] = END
    pri = game.pri_idx[:n]
    w_idx = np.concatenate([pri, pri])
    w_sign = np.concatenate([np.full(n, -1, np.int8), np.full(n, 1, np.int8)])
    return EulerList(suc, int(head[0]), w_idx, w_sign, game.domain)


def splitter_count(m: int, workers: int) -> int:
    """Number of random splitters besides the head."""
    if m <= 1:
        return 0
    k = max(workers, math.ceil(m / (workers * math.log2(m))))
    return min(k, m - 1)


def rank_list(lst: EulerList, workers: int = 1, seed: int = 0) -> RankResult:
    """Exclusive prefix sums along the list from its head, Helman-JaJa style.

    The head is always splitter 0 and a random sample of other elements are
    splitters too. Sublists are walked in parallel, the reduced list of
    splitters is ranked sequentially from the head, and a final pass adds the
    splitter's rank to each element's local prefix. Elements whose splitter
    is unreachable from the head, or that no walk visited, are marked TOP.
    """
    m = lst.m
    d = len(lst.domain)
    counts = np.zeros((m, d), dtype=np.int64)
    top = np.ones(m, dtype=np.uint8)
    if lst.head in (END, EMPTY) or m == 0:
        return RankResult(counts, top.astype(bool), lst.domain)
    rng = np.random.default_rng(seed)
    k = splitter_count(m, workers)
    sample = rng.choice(m, size=min(k + 1, m), replace=False)
    sample = sample[sample != lst.head][:k]
    splitters = np.concatenate([[lst.head], sample]).astype(np.int64)
    s = len(splitters)
    sid = np.full(m, -1, dtype=np.int64)
    sid[splitters] = np.arange(s)
    local = np.empty((m, d), dtype=np.int64)
    owner = np.full(m, -1, dtype=np.int64)
    sub_total = np.zeros((s, d), dtype=np.int64)
    sub_next = np.full(s, END, dtype=np.int64)
    sub_cyclic = np.zeros(s, dtype=np.uint8)
    impl = _kernels.impl
    suc = np.ascontiguousarray(lst.suc, dtype=np.int64)
    w_idx = np.ascontiguousarray(lst.w_idx, dtype=np.int64)
    w_sign = np.ascontiguousarray(lst.w_sign, dtype=np.int8)
    run_chunks(
        lambda lo, hi: impl.rank_walk(suc, w_idx, w_sign, sid, splitters, lo, hi,
                                      local, owner, sub_total, sub_next, sub_cyclic),
        s, workers,
    )
    red_rank = np.zeros((s, d), dtype=np.int64)
    red_top = np.ones(s, dtype=np.uint8)
    impl.rank_reduced(sub_total, sub_next, sub_cyclic, red_rank, red_top)
    run_chunks(
        lambda lo, hi: impl.rank_combine(owner, local, red_rank, red_top, lo, hi, counts, top),
        m, workers, 4096,
    )
    return RankResult(counts, top.astype(bool), lst.domain)


def valuations_from_ranks(lst: EulerList, ranks: RankResult) -> ValuationTable:
    """Vertex valuations from element ranks: ``val(v) = rank(up(v))``, sink zero.

    The exclusive prefix at ``up(v)`` already includes the weight of
    ``down(v)``, so it counts ``v``'s own priority.
    """
    n = lst.n
    d = len(lst.domain)
    counts = np.zeros((n + 1, d), dtype=np.int64)
    top = np.zeros(n + 1, dtype=bool)
    counts[:n] = ranks.counts[:n]
    top[:n] = ranks.top[:n]
    counts[top] = 0
    return ValuationTable(lst.domain, counts, top)


def use_parallel(n: int, workers: int) -> bool:
    """Whether the list-ranking pipeline is in its work-efficient regime."""
    m = 2 * n
    if m < MIN_PARALLEL_ELEMENTS:
        return False
    return m > workers * workers * math.log(m)


def compute_valuation_parallel(game, sp, workers: int = 1, seed: int = 0, force: bool = False) -> ValuationTable:
    """Euler tour + list ranking; identical output to :func:`compute_valuation_seq`.

    Small instances are delegated to the sequential walk unless ``force``.
    """
    if not force and not use_parallel(game.n, workers):
        return compute_valuation_seq(game, sp)
    lst = build_euler_list(game, sp, workers)
    return valuations_from_ranks(lst, rank_list(lst, workers, seed))
