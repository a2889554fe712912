"""Correctness machinery that shares no code path with the solver.

Zielonka's recursive algorithm, attractors, a solution verifier based on
strongly connected components, exhaustive play enumeration for tiny games,
and a seeded random game generator.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import GameError, InvariantViolation
from .game import EVEN, NO_CHOICE, ODD, ParityGame, Solution


def _adjacency(g: ParityGame):
    succs = [g.successors(v) for v in range(g.n)]
    preds: list[list[int]] = [[] for _ in range(g.n)]
    for v, ss in enumerate(succs):
        for u in ss:
            preds[u].append(v)
    return succs, preds


def _attractor(owner, succs, preds, player, target, within):
    attr = set(target)
    strategy = {}
    remaining = {}
    queue = deque(attr)
    while queue:
        u = queue.popleft()
        for v in preds[u]:
            if v in attr or v not in within:
                continue
            if owner[v] == player:
                attr.add(v)
                strategy[v] = u
                queue.append(v)
            else:
                if v not in remaining:
                    remaining[v] = sum(1 for w in succs[v] if w in within)
                remaining[v] -= 1
                if remaining[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strategy


def attractor(g: ParityGame, player: int, target) -> set[int]:
    """Vertices from which ``player`` can force a visit to ``target``."""
    succs, preds = _adjacency(g)
    target = set(target)
    attr, _ = _attractor(g.owner.tolist(), succs, preds, player, target, set(range(g.n)))
    return attr


def zielonka_solve(g: ParityGame):
    """Winning regions and positional winning strategies.

    Returns ``(w_even, w_odd, strategy)`` where ``strategy`` maps each vertex
    owned by its winner to a winning successor.
    """
    owner = g.owner.tolist()
    pri = g.priority.tolist()
    succs, preds = _adjacency(g)
    max_depth = len(g.domain) + 1

    def rec(sub, depth):
        if depth > max_depth:
            raise InvariantViolation("Zielonka recursion deeper than the number of priorities")
        won = (set(), set())
        strat = {}
        sub = set(sub)
        while sub:
            p = max(pri[v] for v in sub)
            i = p % 2
            top = {v for v in sub if pri[v] == p}
            a, a_strat = _attractor(owner, succs, preds, i, top, sub)
            sub_won, sub_strat = rec(sub - a, depth + 1)
            if not sub_won[1 - i]:
                won[i].update(sub)
                strat.update((v, u) for v, u in sub_strat.items() if v in sub_won[i])
                strat.update(a_strat)
                for v in top:
                    if owner[v] == i:
                        strat[v] = next(u for u in succs[v] if u in sub)
                break
            b, b_strat = _attractor(owner, succs, preds, 1 - i, sub_won[1 - i], sub)
            won[1 - i].update(b)
            strat.update((v, u) for v, u in sub_strat.items() if v in sub_won[1 - i])
            strat.update(b_strat)
            sub -= b
        return won, strat

    (w_even, w_odd), strat = rec(range(g.n), 0)
    strat = {v: u for v, u in strat.items() if owner[v] == (EVEN if v in w_even else ODD)}
    return frozenset(w_even), frozenset(w_odd), strat


def zielonka_solution(g: ParityGame) -> Solution:
    w_even, w_odd, strat = zielonka_solve(g)
    return Solution.from_sets(g.n, w_even, w_odd, strat)


# ---------------------------------------------------------------------------
# verification


@dataclass
class Counterexample:
    """Why a claimed solution is wrong.

    ``kind`` is ``"cover"``, ``"strategy"``, ``"escape"`` or ``"cycle"``.
    For a cycle, ``vertices`` lists it in order and ``priority`` is its
    maximum, whose parity favours the opponent of ``player``.
    """

    kind: str
    message: str
    player: int | None = None
    vertices: list[int] = field(default_factory=list)
    priority: int | None = None

    def __str__(self):
        return self.message


def _find_cycle(start, members, src, dst):
    """Shortest cycle through ``start`` using edges inside ``members``."""
    adj: dict[int, list[int]] = {}
    for a, b in zip(src.tolist(), dst.tolist()):
        if members[a] and members[b]:
            adj.setdefault(a, []).append(b)
    parent = {start: None}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for b in adj.get(a, ()):
            if b == start:
                path = [a]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            if b not in parent:
                parent[b] = a
                queue.append(b)
    return [start]


def verify_solution(g: ParityGame, sol: Solution) -> Counterexample | None:
    """Check a solution against an unaugmented game; None means it is correct.

    Closure: the winner's strategy edges and all opponent edges stay inside
    each winning set. Parity: in the one-player graph left after fixing the
    winner's choices, no cycle has a maximum priority favouring the opponent.
    """
    n = g.n
    if sol.n != n:
        return Counterexample("cover", f"solution has {sol.n} vertices, game has {n}")
    winner = np.asarray(sol.winner)
    if not np.isin(winner, (EVEN, ODD)).all():
        return Counterexample("cover", "winner entries must be 0 or 1")
    strategy = np.asarray(sol.strategy)
    owner = g.owner
    deg = np.diff(g.ptr)
    src = np.repeat(np.arange(n), deg)
    dst = g.succ
    own_win = owner == winner
    on_strategy = dst == strategy[src]
    hits = np.bincount(src[on_strategy], minlength=n)
    bad = np.flatnonzero(own_win & (hits == 0))
    if len(bad):
        v = int(bad[0])
        choice = int(strategy[v])
        what = "no strategy choice" if choice == NO_CHOICE else f"choice {choice} is not a successor"
        return Counterexample("strategy", f"vertex {v} is won by its owner but has {what}",
                              int(winner[v]), [v])
    keep = ~own_win[src] | on_strategy
    escape = np.flatnonzero(keep & (winner[dst] != winner[src]))
    if len(escape):
        e = int(escape[0])
        a, b = int(src[e]), int(dst[e])
        return Counterexample("escape", f"edge ({a}, {b}) leaves the winning set of player {winner[a]}",
                              int(winner[a]), [a, b])
    pri = g.priority
    ksrc, kdst = src[keep], dst[keep]
    for player in (EVEN, ODD):
        region = winner == player
        bad_pris = sorted({int(p) for p in pri[region] if p % 2 != player})
        for p in bad_pris:
            members = region & (pri <= p)
            sel = members[ksrc] & members[kdst]
            a, b = ksrc[sel], kdst[sel]
            graph = csr_matrix((np.ones(len(a), dtype=np.int8), (a, b)), shape=(n, n))
            _, comp = connected_components(graph, directed=True, connection="strong")
            sizes = np.bincount(comp, minlength=n)
            selfloop = np.zeros(n, dtype=bool)
            selfloop[a[a == b]] = True
            cand = np.flatnonzero(members & (pri == p) & ((sizes[comp] > 1) | selfloop))
            if len(cand):
                x = int(cand[0])
                in_comp = comp == comp[x]
                cycle = _find_cycle(x, in_comp & members, a, b)
                who = "Even" if player == EVEN else "Odd"
                return Counterexample(
                    "cycle",
                    f"cycle {cycle} inside {who}'s winning set has maximum priority {p}",
                    player, cycle, p,
                )
    return None


# ---------------------------------------------------------------------------
# definition-level enumeration for tiny games


def _maxio_all(pri, choice):
    """maxio of the play from every vertex when each vertex follows ``choice``."""
    n = len(choice)
    result = [None] * n
    for v in range(n):
        if result[v] is not None:
            continue
        order = {}
        path = []
        u = v
        while u not in order and result[u] is None:
            order[u] = len(path)
            path.append(u)
            u = choice[u]
        if result[u] is None:
            cyc = path[order[u]:]
            m = max(pri[w] for w in cyc)
            for w in cyc:
                result[w] = m
            path = path[:order[u]]
        m = result[u]
        for w in path:
            result[w] = m
    return result


def strategy_space(g: ParityGame, player: int) -> int:
    deg = np.diff(g.ptr)[g.owner == player]
    return int(np.prod(deg.astype(object))) if len(deg) else 1


def exhaustive_winners(g: ParityGame, limit: int = 4096) -> np.ndarray:
    """Winner of every vertex by trying every pair of positional strategies.

    Even wins ``v`` iff some Even strategy makes every Odd reply produce an
    even maxio from ``v``.
    """
    if strategy_space(g, EVEN) * strategy_space(g, ODD) > limit:
        raise GameError("strategy space too large for exhaustive enumeration")
    pri = g.priority.tolist()
    succs = [g.successors(v) for v in range(g.n)]
    even = [v for v in range(g.n) if g.owner[v] == EVEN]
    odd = [v for v in range(g.n) if g.owner[v] == ODD]
    even_wins = [False] * g.n
    choice = [0] * g.n
    for sig in itertools.product(*(succs[v] for v in even)):
        for v, u in zip(even, sig):
            choice[v] = u
        safe = [True] * g.n
        for tau in itertools.product(*(succs[v] for v in odd)):
            for v, u in zip(odd, tau):
                choice[v] = u
            for v, m in enumerate(_maxio_all(pri, choice)):
                if m % 2:
                    safe[v] = False
        for v in range(g.n):
            even_wins[v] = even_wins[v] or safe[v]
    return np.where(even_wins, EVEN, ODD).astype(np.int8)


# ---------------------------------------------------------------------------
# random games


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    max_priority: int
    min_degree: int = 1
    max_degree: int = 3
    seed: int = 0

    def validate(self):
        if self.n < 1:
            raise GameError("n must be at least 1")
        if self.max_priority < 0:
            raise GameError("max_priority must be non-negative")
        if not 1 <= self.min_degree <= self.max_degree:
            raise GameError("need 1 <= min_degree <= max_degree")
        if self.max_degree > self.n:
            raise GameError("max_degree cannot exceed n when successors are distinct")


# Above this size successors are drawn in bulk with duplicate rejection.
_BULK_THRESHOLD = 4096


def gen_random_game(spec: GeneratorSpec) -> ParityGame:
    """Uniform owners, priorities and out-degrees; distinct successors per vertex."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    owner = rng.integers(0, 2, size=n).astype(np.int8)
    priority = rng.integers(0, spec.max_priority + 1, size=n)
    degree = rng.integers(spec.min_degree, spec.max_degree + 1, size=n)
    ptr = np.zeros(n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum(degree)
    if n <= _BULK_THRESHOLD:
        succ = np.concatenate([rng.choice(n, size=k, replace=False) for k in degree.tolist()])
    else:
        width = spec.max_degree
        cand = rng.integers(0, n, size=(n, width))
        slot = np.arange(width)
        while True:
            s = np.sort(cand, axis=1)
            dup_pos = np.zeros((n, width), dtype=bool)
            dup_pos[:, 1:] = s[:, 1:] == s[:, :-1]
            # duplicates only matter within the first degree[v] entries
            order = np.argsort(cand, axis=1, kind="stable")
            used = slot[None, :] < degree[:, None]
            dup = np.zeros((n, width), dtype=bool)
            np.put_along_axis(dup, order, dup_pos, axis=1)
            dup &= used
            rows = np.flatnonzero(dup.any(axis=1))
            if not len(rows):
                break
            cand[dup] = rng.integers(0, n, size=int(dup.sum()))
        succ = cand[np.arange(width)[None, :] < degree[:, None]]
    return ParityGame(owner, priority, ptr, succ.astype(np.int64))
