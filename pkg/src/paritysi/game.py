"""Parity game data model, PGSolver I/O, sink augmentation and preprocessing.

Games are stored in compressed sparse row form: the successors of vertex ``v``
are ``succ[ptr[v]:ptr[v + 1]]`` in the order they were written. All arrays are
made read-only after construction so a game can be shared between threads.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import GameError, ParseError

EVEN = 0
ODD = 1

# Slot value for "no strategy choice" in solution arrays.
NO_CHOICE = -1


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


class ParityGame:
    """A parity game ``(V, V_Even, V_Odd, E, pri)`` without terminal vertices."""

    __slots__ = ("owner", "priority", "ptr", "succ", "names", "domain")

    def __init__(self, owner, priority, ptr, succ, names=None):
        owner = np.asarray(owner)
        priority = np.asarray(priority)
        ptr = np.asarray(ptr)
        succ = np.asarray(succ)
        n = len(owner)
        if len(priority) != n or len(ptr) != n + 1:
            raise GameError("owner, priority and ptr lengths disagree")
        if n and (ptr[0] != 0 or ptr[-1] != len(succ)):
            raise GameError("malformed successor index")
        if n and np.any(np.diff(ptr) < 1):
            v = int(np.flatnonzero(np.diff(ptr) < 1)[0])
            raise GameError(f"vertex {v} has no successors")
        if len(succ) and (succ.min() < 0 or succ.max() >= n):
            raise GameError("successor id out of range")
        if n and not np.isin(owner, (EVEN, ODD)).all():
            raise GameError("owner must be 0 (Even) or 1 (Odd)")
        if n and priority.min() < 0:
            raise GameError("priorities must be non-negative")
        if names is not None and len(names) != n:
            raise GameError("names length disagrees with vertex count")
        self.owner = _frozen(owner, np.int8)
        self.priority = _frozen(priority, np.int64)
        self.ptr = _frozen(ptr, np.int64)
        self.succ = _frozen(succ, np.int64)
        self.names = None if names is None else tuple(names)
        self.domain = tuple(int(p) for p in np.unique(self.priority))

    @classmethod
    def from_lists(cls, owners, priorities, successors, names=None):
        """Build a game from per-vertex owner, priority and successor lists."""
        successors = [list(s) for s in successors]
        ptr = np.zeros(len(successors) + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(s) for s in successors])
        flat = [u for s in successors for u in s]
        return cls(owners, priorities, ptr, np.array(flat, dtype=np.int64), names)

    @property
    def n(self) -> int:
        return len(self.owner)

    @property
    def num_edges(self) -> int:
        return len(self.succ)

    def successors(self, v: int) -> list[int]:
        return self.succ[self.ptr[v]:self.ptr[v + 1]].tolist()

    def predecessors(self) -> list[list[int]]:
        preds: list[list[int]] = [[] for _ in range(self.n)]
        for v in range(self.n):
            for u in self.successors(v):
                preds[u].append(v)
        return preds

    def vertices_of(self, player: int) -> np.ndarray:
        return np.flatnonzero(self.owner == player)

    def __eq__(self, other):
        if not isinstance(other, ParityGame):
            return NotImplemented
        return (
            np.array_equal(self.owner, other.owner)
            and np.array_equal(self.priority, other.priority)
            and np.array_equal(self.ptr, other.ptr)
            and np.array_equal(self.succ, other.succ)
            and self.names == other.names
        )

    __hash__ = None

    def __repr__(self):
        return f"ParityGame(n={self.n}, edges={self.num_edges}, priorities={list(self.domain)})"


class AugmentedGame:
    """A game with an extra sink vertex ``s = n`` reachable from every Even vertex.

    The sink edge of an Even vertex is appended after its original successors.
    ``pri_idx`` maps every vertex to the rank of its priority in ``domain``;
    the sink has rank -1 and contributes nothing to valuations.

    ``original_n`` and ``forward`` describe preprocessing: vertices with id
    ``>= original_n`` were inserted, and ``forward[w]`` is the single original
    successor of inserted vertex ``w``.
    """

    def __init__(self, base: ParityGame, *, original_n=None, forward=None):
        n = base.n
        self.base = base
        self.sink = n
        deg = np.diff(base.ptr)
        is_even = base.owner == EVEN
        new_deg = deg + is_even
        ptr = np.zeros(n + 2, dtype=np.int64)
        ptr[1:n + 1] = np.cumsum(new_deg)
        ptr[n + 1] = ptr[n]
        succ = np.empty(ptr[n], dtype=np.int64)
        sink_edge = np.zeros(ptr[n], dtype=bool)
        # positions of original edges after shifting by the number of sink edges before them
        shift = np.repeat(ptr[:n] - base.ptr[:n], deg)
        succ[np.arange(base.num_edges) + shift] = base.succ
        last = ptr[1:n + 1][is_even] - 1
        succ[last] = n
        sink_edge[last] = True
        self.ptr = _frozen(ptr, np.int64)
        self.succ = _frozen(succ, np.int64)
        self.sink_edge = _frozen(sink_edge, bool)
        self.owner = _frozen(np.append(base.owner, EVEN), np.int8)
        self.domain = base.domain
        dom = np.asarray(self.domain, dtype=np.int64)
        pri_idx = np.searchsorted(dom, base.priority) if n else np.zeros(0, np.int64)
        self.pri_idx = _frozen(np.append(pri_idx, -1), np.int64)
        # +1 where more of that priority is better for Even
        self.parity_sign = _frozen(np.where(dom % 2 == 0, 1, -1), np.int8)
        self.original_n = n if original_n is None else original_n
        self.forward = forward

    @property
    def n(self) -> int:
        """Number of non-sink vertices."""
        return self.base.n

    @property
    def num_vertices(self) -> int:
        return self.base.n + 1

    @property
    def num_edges(self) -> int:
        return len(self.succ)

    @property
    def inserted(self) -> int:
        return self.n - self.original_n

    def successors(self, v: int) -> list[int]:
        return self.succ[self.ptr[v]:self.ptr[v + 1]].tolist()

    def __repr__(self):
        return f"AugmentedGame(n={self.n}, sink={self.sink}, edges={self.num_edges})"


def augment_with_sink(game: ParityGame) -> AugmentedGame:
    """Add the sink vertex and one sink edge per Even vertex."""
    if isinstance(game, AugmentedGame):
        raise GameError("game is already augmented with a sink")
    return AugmentedGame(game)


def odd_trap(game: AugmentedGame | ParityGame) -> np.ndarray:
    """Largest set of Odd vertices in which every member has a successor in the set.

    Returned as a boolean mask over the non-sink vertices. Non-empty exactly
    when Odd can cycle forever without visiting an Even vertex.
    """
    base = game.base if isinstance(game, AugmentedGame) else game
    return _kernels.impl.odd_trap(base.ptr, base.succ, base.owner).astype(bool)


def preprocess_admissible(game: AugmentedGame) -> tuple[AugmentedGame, int]:
    """Break Odd-only cycles by subdividing edges inside the Odd trap.

    Each edge ``(u, v)`` with both ends in the trap gets a fresh Even vertex of
    priority 0 between them. Returns the new augmented game and the number of
    inserted vertices (0 means the input is returned unchanged).
    """
    base = game.base
    trap = odd_trap(base)
    if not trap.any():
        return game, 0
    n = base.n
    src = np.repeat(np.arange(n), np.diff(base.ptr))
    dst = base.succ
    cut = trap[src] & trap[dst]
    k = int(cut.sum())
    new_ids = np.arange(n, n + k)
    succ = dst.copy()
    succ[cut] = new_ids
    ptr_new = np.concatenate([base.ptr, base.ptr[-1] + np.arange(1, k + 1)])
    succ_new = np.concatenate([succ, dst[cut]])
    owner = np.concatenate([base.owner, np.full(k, EVEN, dtype=np.int8)])
    priority = np.concatenate([base.priority, np.zeros(k, dtype=np.int64)])
    names = None
    if base.names is not None:
        names = base.names + (None,) * k
    # forward maps every vertex of the new game to its original id
    forward = np.concatenate([np.arange(n), dst[cut]])
    if game.forward is not None:
        forward = game.forward[forward]
    new_base = ParityGame(owner, priority, ptr_new, succ_new, names)
    return AugmentedGame(new_base, original_n=game.original_n, forward=_frozen(forward, np.int64)), k


# ---------------------------------------------------------------------------
# PGSolver format

_TOKEN = re.compile(
    r'(?P<ws>\s+)|(?P<int>-?\d+)|(?P<str>"(?:[^"\\]|\\.)*")|(?P<sep>[,;])|(?P<word>[A-Za-z_]\w*)'
)


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", text)]
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        for m in _TOKEN.finditer(text):
            if m.start() != pos:
                break
            pos = m.end()
            kind = m.lastgroup
            if kind != "ws":
                self.toks.append((kind, m.group(), m.start()))
        if pos != len(text):
            self.fail(f"unexpected character {text[pos]!r}", pos)
        self.i = 0

    def where(self, offset):
        line = bisect.bisect_right(self.line_starts, offset)
        return line, offset - self.line_starts[line - 1] + 1

    def fail(self, msg, offset=None):
        if offset is None:
            offset = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise ParseError(msg, *self.where(offset))

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind, what):
        tok = self.peek()
        if tok is None or tok[0] != kind:
            found = "end of input" if tok is None else repr(tok[1])
            self.fail(f"expected {what}, found {found}")
        self.i += 1
        return tok

    def nat(self, what):
        tok = self.take("int", what)
        if tok[1].startswith("-"):
            self.fail(f"{what} must be non-negative", tok[2])
        return int(tok[1]), tok[2]


def parse_pgsolver(data: bytes | str) -> ParityGame:
    """Parse a game in PGSolver format.

    >>> g = parse_pgsolver("parity 1;\\n0 2 0 1;\\n1 1 1 0;")
    >>> g.n, g.successors(1)
    (2, [0])
    """
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    toks = _Tokens(data)
    maxid = None
    while toks.peek() is not None and toks.peek()[0] == "word":
        kw = toks.take("word", "keyword")
        if kw[1] == "parity":
            if maxid is not None:
                toks.fail("duplicate 'parity' header", kw[2])
            maxid, _ = toks.nat("maximum vertex id")
        elif kw[1] == "start":
            toks.nat("start vertex")
        else:
            toks.fail(f"unknown keyword {kw[1]!r}", kw[2])
        tok = toks.peek()
        if tok is None or tok[1] != ";":
            toks.fail("expected ';'")
        toks.i += 1

    records: dict[int, tuple[int, int, list[tuple[int, int]], str | None]] = {}
    while toks.peek() is not None:
        vid, at = toks.nat("vertex id")
        if vid in records:
            toks.fail(f"duplicate definition of vertex {vid}", at)
        pri, _ = toks.nat("priority")
        own, own_at = toks.nat("owner")
        if own not in (EVEN, ODD):
            toks.fail("owner must be 0 or 1", own_at)
        tok = toks.peek()
        if tok is None or tok[0] != "int":
            toks.fail(f"vertex {vid} has an empty successor list")
        succs = [toks.nat("successor id")]
        while toks.peek() is not None and toks.peek()[1] == ",":
            toks.i += 1
            succs.append(toks.nat("successor id"))
        name = None
        if toks.peek() is not None and toks.peek()[0] == "str":
            raw = toks.take("str", "name")[1][1:-1]
            name = re.sub(r"\\(.)", r"\1", raw)
        tok = toks.peek()
        if tok is None or tok[1] != ";":
            toks.fail("expected ';'")
        toks.i += 1
        records[vid] = (pri, own, succs, name)

    if maxid is None:
        maxid = max(records) if records else -1
    n = maxid + 1
    for vid in records:
        if vid > maxid:
            raise ParseError(f"vertex {vid} exceeds declared maximum id {maxid}")
    missing = [v for v in range(n) if v not in records]
    if missing:
        raise ParseError(f"vertex {missing[0]} is not defined")
    owners, pris, succ_lists, names = [], [], [], []
    for v in range(n):
        pri, own, succs, name = records[v]
        for u, at in succs:
            if u > maxid:
                toks.fail(f"successor {u} of vertex {v} is out of range", at)
        owners.append(own)
        pris.append(pri)
        succ_lists.append([u for u, _ in succs])
        names.append(name)
    if all(x is None for x in names):
        names = None
    return ParityGame.from_lists(owners, pris, succ_lists, names)


def write_pgsolver(game: ParityGame) -> str:
    out = [f"parity {game.n - 1};"]
    ptr = game.ptr.tolist()
    succ = game.succ.tolist()
    pri = game.priority.tolist()
    own = game.owner.tolist()
    for v in range(game.n):
        line = f"{v} {pri[v]} {own[v]} " + ",".join(map(str, succ[ptr[v]:ptr[v + 1]]))
        if game.names is not None and game.names[v] is not None:
            escaped = game.names[v].replace("\\", "\\\\").replace('"', '\\"')
            line += f' "{escaped}"'
        out.append(line + ";")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Solutions


@dataclass
class SolveStats:
    major_iterations: int = 0
    br_iterations: int = 0
    valuation_time: float = 0.0
    total_time: float = 0.0
    vertices: int = 0
    edges: int = 0
    priorities: int = 0
    inserted_vertices: int = 0
    config: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "vertices": self.vertices,
            "edges": self.edges,
            "priorities": self.priorities,
            "inserted_vertices": self.inserted_vertices,
            "major_iterations": self.major_iterations,
            "br_iterations": self.br_iterations,
            "time_total_ms": round(self.total_time * 1000, 3),
            "time_valuation_ms": round(self.valuation_time * 1000, 3),
            "config": dict(self.config),
        }


@dataclass
class Solution:
    """Winning partition plus positional winning strategies.

    ``winner[v]`` is 0 (Even) or 1 (Odd). ``strategy[v]`` is the winning
    choice of ``v`` when ``v`` is owned by its winner, else ``NO_CHOICE``.
    """

    winner: np.ndarray
    strategy: np.ndarray
    stats: SolveStats | None = None

    @property
    def n(self) -> int:
        return len(self.winner)

    @property
    def w_even(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.winner == EVEN).tolist())

    @property
    def w_odd(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.winner == ODD).tolist())

    def _strategy_of(self, player):
        idx = np.flatnonzero((self.winner == player) & (self.strategy != NO_CHOICE))
        return dict(zip(idx.tolist(), self.strategy[idx].tolist()))

    @property
    def sigma_star(self) -> dict[int, int]:
        """Even's winning choices. Only meaningful together with owner data;
        contains every Even-won vertex that has a recorded choice."""
        return self._strategy_of(EVEN)

    @property
    def tau_star(self) -> dict[int, int]:
        return self._strategy_of(ODD)

    @classmethod
    def from_sets(cls, n, w_even: Iterable[int], w_odd: Iterable[int], sigma=None, tau=None, stats=None):
        winner = np.full(n, -1, dtype=np.int8)
        winner[list(w_even)] = EVEN
        winner[list(w_odd)] = ODD
        if (winner < 0).any():
            raise GameError("winning sets do not cover every vertex")
        if len(set(w_even) & set(w_odd)):
            raise GameError("winning sets overlap")
        strategy = np.full(n, NO_CHOICE, dtype=np.int64)
        for strat in (sigma or {}, tau or {}):
            for v, u in strat.items():
                strategy[v] = u
        return cls(winner, strategy, stats)


def write_solution(sol: Solution) -> str:
    """Render a solution in PGSolver ``paritysol`` format."""
    out = [f"paritysol {sol.n - 1};"]
    winner = sol.winner.tolist()
    strategy = sol.strategy.tolist()
    for v in range(sol.n):
        if strategy[v] == NO_CHOICE:
            out.append(f"{v} {winner[v]};")
        else:
            out.append(f"{v} {winner[v]} {strategy[v]};")
    return "\n".join(out) + "\n"


def parse_solution(data: bytes | str) -> Solution:
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    toks = _Tokens(data)
    maxid = None
    if toks.peek() is not None and toks.peek()[0] == "word":
        kw = toks.take("word", "keyword")
        if kw[1] != "paritysol":
            toks.fail(f"unknown keyword {kw[1]!r}", kw[2])
        maxid, _ = toks.nat("maximum vertex id")
        toks.take("sep", "';'")
    rows: dict[int, tuple[int, int]] = {}
    while toks.peek() is not None:
        vid, at = toks.nat("vertex id")
        if vid in rows:
            toks.fail(f"duplicate entry for vertex {vid}", at)
        win, win_at = toks.nat("winner")
        if win not in (EVEN, ODD):
            toks.fail("winner must be 0 or 1", win_at)
        choice = NO_CHOICE
        if toks.peek() is not None and toks.peek()[0] == "int":
            choice, _ = toks.nat("strategy successor")
        tok = toks.peek()
        if tok is None or tok[1] != ";":
            toks.fail("expected ';'")
        toks.i += 1
        rows[vid] = (win, choice)
    if maxid is None:
        maxid = max(rows) if rows else -1
    missing = [v for v in range(maxid + 1) if v not in rows]
    if missing:
        raise ParseError(f"no entry for vertex {missing[0]}")
    if any(v > maxid for v in rows):
        raise ParseError("vertex id exceeds declared maximum")
    winner = np.array([rows[v][0] for v in range(maxid + 1)], dtype=np.int8)
    strategy = np.array([rows[v][1] for v in range(maxid + 1)], dtype=np.int64)
    return Solution(winner, strategy)

