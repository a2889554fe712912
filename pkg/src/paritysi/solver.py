"""Two-player greedy all-switches strategy improvement, with Even as improver."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np

from .best_response import best_response_bellman_ford, best_response_si
from .errors import GameError, InvariantViolation, NotAdmissibleError
from .euler_rank import compute_valuation_parallel, compute_valuation_seq
from .game import (
    EVEN,
    NO_CHOICE,
    ODD,
    AugmentedGame,
    Solution,
    SolveStats,
    augment_with_sink,
    odd_trap,
    preprocess_admissible,
)
from .strategy import StrategyPair, SwitchSet, apply_switches, switch_targets
from .valuation import ValuationTable, compare_rows

BR_METHODS = ("si", "si-reset", "bellman-ford")
VAL_BACKENDS = ("seq", "listrank")


@dataclass
class SolveConfig:
    br_method: str = "si"
    val_backend: str = "listrank"
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    seed: int = 0
    check_invariants: bool = False
    time_limit: float | None = None
    # run list ranking even where it would normally defer to the sequential walk
    force_parallel: bool = False

    def __post_init__(self):
        if self.br_method not in BR_METHODS:
            raise ValueError(f"br_method must be one of {BR_METHODS}, got {self.br_method!r}")
        if self.val_backend not in VAL_BACKENDS:
            raise ValueError(f"val_backend must be one of {VAL_BACKENDS}, got {self.val_backend!r}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    def echo(self) -> dict:
        return {"br": self.br_method, "val": self.val_backend, "threads": self.threads, "seed": self.seed}

    def valuator(self):
        if self.val_backend == "seq":
            return compute_valuation_seq
        threads, seed, force = self.threads, self.seed, self.force_parallel
        return lambda game, sp: compute_valuation_parallel(game, sp, threads, seed, force)


def initial_strategy(game: AugmentedGame) -> StrategyPair:
    """Every Even vertex to the sink, every Odd vertex to its first successor."""
    if odd_trap(game).any():
        raise NotAdmissibleError(
            "Odd can cycle through Odd vertices only; preprocess_admissible the game first"
        )
    choice = np.full(game.num_vertices, -1, dtype=np.int64)
    choice[:game.n] = game.succ[game.ptr[:game.n]]
    even = np.flatnonzero(game.owner[:game.n] == EVEN)
    choice[even] = game.sink
    return StrategyPair(game, choice)


def even_switchable_set(game: AugmentedGame, vals: ValuationTable, sp: StrategyPair, workers: int = 1) -> SwitchSet:
    """Greedy all-switches for Even: each improvable vertex goes to a best successor."""
    return SwitchSet.from_targets(switch_targets(game, EVEN, sp.choice, vals, workers))


def _check_improvement(prev: ValuationTable, cur: ValuationTable, major: int):
    order = compare_rows(cur.domain, cur, prev)
    if (order < 0).any():
        v = int(np.flatnonzero(order < 0)[0])
        raise InvariantViolation(f"major iteration {major}: valuation of vertex {v} decreased ({prev[v]} -> {cur[v]})")
    if not (order > 0).any():
        raise InvariantViolation(f"major iteration {major}: no vertex valuation strictly increased")


def _check_best_response(game, pair, vals, workers):
    if switch_targets(game, ODD, pair.choice, vals, workers).max(initial=-1) >= 0:
        raise InvariantViolation("best response still has Odd-switchable edges")
    if compute_valuation_seq(game, pair) != vals:
        raise InvariantViolation("best-response valuations disagree with the strategy pair")


def solve(game: AugmentedGame, cfg: SolveConfig | None = None, trace=None) -> Solution:
    """Solve a preprocessed augmented game.

    ``trace``, if given, is called as ``trace(event, pair, vals)`` with event
    ``"valuation"`` for every inner valuation and ``"best_response"`` once per
    major iteration.

    The returned solution is over the game's original vertices: inserted
    preprocessing vertices are dropped and strategy edges through them are
    mapped back to the edge they subdivide.
    """
    cfg = cfg or SolveConfig()
    t_start = time.perf_counter()
    deadline = None if cfg.time_limit is None else t_start + cfg.time_limit
    stats = SolveStats(
        vertices=game.original_n,
        # each inserted vertex subdivides one input edge
        edges=int(game.num_edges - np.count_nonzero(game.sink_edge) - game.inserted),
        priorities=len(game.domain),
        inserted_vertices=game.inserted,
        config=cfg.echo(),
    )
    pair = initial_strategy(game)
    odd_mask = game.owner == ODD
    reset_tau = pair.choice[odd_mask].copy()
    valuate = cfg.valuator()
    workers = cfg.threads
    on_val = None if trace is None else (lambda p, v: trace("valuation", p, v))
    prev_vals = None
    seen = set()

    while True:
        stats.major_iterations += 1
        if cfg.check_invariants:
            key = pair.key(EVEN)
            if key in seen:
                raise InvariantViolation(f"Even strategy revisited at major iteration {stats.major_iterations}")
            seen.add(key)
        if cfg.br_method == "bellman-ford":
            res = best_response_bellman_ford(game, pair, deadline=deadline)
        else:
            if cfg.br_method == "si-reset":
                pair.choice[odd_mask] = reset_tau
            res = best_response_si(game, pair, valuate, workers=workers, on_valuation=on_val, deadline=deadline)
        stats.br_iterations += res.iterations
        stats.valuation_time += res.valuation_time
        pair, vals = res.pair, res.vals
        if trace is not None:
            trace("best_response", pair, vals)
        if cfg.check_invariants:
            _check_best_response(game, pair, vals, workers)
            if prev_vals is not None:
                _check_improvement(prev_vals, vals, stats.major_iterations)
        prev_vals = vals
        switches = even_switchable_set(game, vals, pair, workers)
        if not switches:
            break
        pair = apply_switches(pair, switches, EVEN) if cfg.check_invariants else _fast_switch(pair, switches)

    stats.total_time = time.perf_counter() - t_start
    return _extract(game, pair, vals, stats)


def _fast_switch(pair: StrategyPair, switches: SwitchSet) -> StrategyPair:
    out = pair.copy()
    out.choice[switches.vertices] = switches.targets
    return out


def _extract(game: AugmentedGame, pair: StrategyPair, vals: ValuationTable, stats: SolveStats) -> Solution:
    n0 = game.original_n
    top = vals.top[:n0]
    winner = np.where(top, EVEN, ODD).astype(np.int8)
    owner = game.owner[:n0]
    choice = pair.choice[:n0].copy()
    if game.forward is not None:
        inserted = (choice >= n0) & (choice < game.n)
        choice[inserted] = game.forward[choice[inserted]]
    strategy = np.where(owner == winner, choice, NO_CHOICE).astype(np.int64)
    if (strategy == game.sink).any():
        raise InvariantViolation("a winning strategy uses a sink edge")
    return Solution(winner, strategy, stats)


def solve_game(base, cfg: SolveConfig | None = None, trace=None) -> Solution:
    """Augment, preprocess and solve an ordinary :class:`ParityGame`."""
    if isinstance(base, AugmentedGame):
        raise GameError("solve_game expects an unaugmented game; use solve() for augmented ones")
    game, _ = preprocess_admissible(augment_with_sink(base))
    return solve(game, cfg, trace)
