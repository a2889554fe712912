"""Fixture games and brute-force oracles shared by the test modules."""

import itertools

import numpy as np

from paritysi.game import EVEN, ODD, ParityGame, augment_with_sink, preprocess_admissible
from paritysi.oracle import GeneratorSpec, gen_random_game
from paritysi.strategy import StrategyPair


def g2():
    """v0 Even pri 2 -> v1; v1 Odd pri 1 -> v0, v2; v2 Even pri 4 -> v1."""
    return ParityGame.from_lists([EVEN, ODD, EVEN], [2, 1, 4], [[1], [0, 2], [1]])


def odd_self_loop():
    return ParityGame.from_lists([ODD], [3], [[0]])


def even_self_loop():
    return ParityGame.from_lists([EVEN], [2], [[0]])


def tree_game():
    """A two-level tree hanging off the sink.

    b=0, c=1 hang off the sink; d=2, e=3 hang off b. pri(b)=2, pri(d)=3.
    """
    g = ParityGame.from_lists([EVEN, EVEN, ODD, ODD], [2, 1, 3, 4], [[0], [1], [0], [0]])
    a = augment_with_sink(g)
    sink = a.sink
    return a, StrategyPair(a, [sink, sink, 0, 0, -1])


def prepared(g):
    return preprocess_admissible(augment_with_sink(g))[0]


def random_game(seed, n_range=(2, 60), max_pri=6, max_deg=4):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    spec = GeneratorSpec(n=n, max_priority=max_pri, min_degree=1, max_degree=min(max_deg, n), seed=seed)
    return gen_random_game(spec)


def random_strategy_pair(game, rng):
    """Uniformly random choice per vertex (Even may pick the sink)."""
    choice = np.full(game.num_vertices, -1, dtype=np.int64)
    for v in range(game.n):
        succ = game.succ[game.ptr[v]:game.ptr[v + 1]]
        choice[v] = succ[rng.integers(len(succ))]
    return StrategyPair(game, choice)


def walk_valuation(game, choice, v):
    """Definition-level valuation: follow the play and count priorities (None = TOP)."""
    counts = dict.fromkeys(game.domain, 0)
    seen = set()
    while v != game.sink:
        if v in seen:
            return None
        seen.add(v)
        counts[int(game.base.priority[v])] += 1
        v = int(choice[v])
    return tuple(counts[p] for p in game.domain)


def all_odd_strategies(game, choice):
    """Every Odd strategy combined with the Even part of ``choice``."""
    odd = [v for v in range(game.n) if game.owner[v] == ODD]
    options = [game.successors(v) for v in odd]
    for combo in itertools.product(*options):
        c = np.array(choice, dtype=np.int64)
        c[odd] = combo
        yield c
