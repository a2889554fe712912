"""Odd's best response to a fixed admissible Even strategy.

Two methods, both over the valuation order: one-player greedy all-switches
strategy improvement (the default) and Bellman-Ford relaxation (baseline).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvariantViolation, SolveTimeout
from .euler_rank import compute_valuation_seq
from .game import ODD
from .strategy import StrategyPair, SwitchSet, switch_targets
from .valuation import ValuationTable


@dataclass
class BestResponseResult:
    pair: StrategyPair
    vals: ValuationTable
    iterations: int
    valuation_time: float = 0.0

    @property
    def tau(self) -> dict[int, int]:
        return self.pair.tau


def odd_switchable_set(game, sp: StrategyPair, vals: ValuationTable, workers: int = 1) -> SwitchSet:
    """Odd vertices with a strictly smaller successor, each paired with a minimal one."""
    return SwitchSet.from_targets(switch_targets(game, ODD, sp.choice, vals, workers))


def best_response_si(game, sp: StrategyPair, valuate=compute_valuation_seq, *, workers: int = 1,
                     on_valuation=None, deadline: float | None = None) -> BestResponseResult:
    """One-player strategy improvement for Odd, warm-started from ``sp``'s tau.

    Each iteration computes the valuation of the current pair and switches
    every Odd-switchable vertex to a minimal successor. Stops when nothing is
    switchable; gives up after ``|V|*|E|`` iterations.
    """
    bound = game.num_vertices * game.num_edges
    pair = sp.copy()
    iterations = 0
    spent = 0.0
    while True:
        if deadline is not None and time.perf_counter() > deadline:
            raise SolveTimeout("time limit reached during best response")
        if iterations >= max(bound, 1):
            raise InvariantViolation(
                f"one-player strategy improvement exceeded {bound} iterations; "
                "the Even strategy is probably not admissible"
            )
        t0 = time.perf_counter()
        vals = valuate(game, pair)
        spent += time.perf_counter() - t0
        iterations += 1
        if on_valuation is not None:
            on_valuation(pair, vals)
        targets = switch_targets(game, ODD, pair.choice, vals, workers)
        switch = targets >= 0
        if not switch.any():
            return BestResponseResult(pair, vals, iterations, spent)
        pair.choice[switch] = targets[switch]


def best_response_bellman_ford(game, sp: StrategyPair, *, deadline: float | None = None) -> BestResponseResult:
    """Shortest paths to the sink under the valuation order, by ascending sweeps.

    Starts from the sink at zero and everything else TOP. Even vertices follow
    sigma, Odd vertices take the minimal successor (smallest id on ties).
    ``iterations`` counts sweeps including the final one that changes nothing.
    """
    N = game.num_vertices
    d = len(game.domain)
    counts = np.zeros((N, d), dtype=np.int64)
    top = np.ones(N, dtype=np.uint8)
    top[game.sink] = 0
    choice = sp.choice.copy()
    impl = _kernels.impl
    passes = 0
    t0 = time.perf_counter()
    while True:
        if deadline is not None and time.perf_counter() > deadline:
            raise SolveTimeout("time limit reached during Bellman-Ford")
        passes += 1
        if passes > game.n + 1:
            raise InvariantViolation(
                f"Bellman-Ford did not converge within {game.n + 1} passes; "
                "negative cycle, so the Even strategy is not admissible"
            )
        changed = impl.bf_pass(game.ptr, game.succ, game.owner, game.pri_idx, choice,
                               counts, top, game.parity_sign)
        if not changed:
            break
    spent = time.perf_counter() - t0
    top = top.astype(bool)
    counts[top] = 0
    return BestResponseResult(StrategyPair(game, choice), ValuationTable(game.domain, counts, top), passes, spent)
