"""Strategy pairs, switch sets and the greedy all-switches target selection."""

from __future__ import annotations

import numpy as np

from . import _kernels
from ._parallel import run_chunks
from .errors import GameError
from .game import EVEN, ODD, AugmentedGame


class StrategyPair:
    """Positional strategies of both players over an augmented game.

    ``choice[v]`` is the chosen successor of every non-sink vertex: sigma on
    Even vertices (possibly the sink), tau on Odd vertices. ``choice[sink]``
    is -1.
    """

    __slots__ = ("game", "choice")

    def __init__(self, game: AugmentedGame, choice):
        self.game = game
        self.choice = np.ascontiguousarray(choice, dtype=np.int64)

    def _part(self, player):
        idx = np.flatnonzero(self.game.owner[:-1] == player)
        return dict(zip(idx.tolist(), self.choice[idx].tolist()))

    @property
    def sigma(self) -> dict[int, int]:
        return self._part(EVEN)

    @property
    def tau(self) -> dict[int, int]:
        return self._part(ODD)

    def copy(self) -> "StrategyPair":
        return StrategyPair(self.game, self.choice.copy())

    def key(self, player=None) -> bytes:
        """Hashable snapshot, optionally of one player's part only."""
        if player is None:
            return self.choice.tobytes()
        return self.choice[self.game.owner == player].tobytes()

    def __eq__(self, other):
        if not isinstance(other, StrategyPair):
            return NotImplemented
        return self.game is other.game and np.array_equal(self.choice, other.choice)

    __hash__ = None

    def __repr__(self):
        return f"StrategyPair(sigma={self.sigma}, tau={self.tau})"


class SwitchSet:
    """Edges ``(v, u)`` to switch, at most one per vertex."""

    __slots__ = ("vertices", "targets")

    def __init__(self, pairs=()):
        pairs = list(pairs)
        vs = [int(v) for v, _ in pairs]
        if len(set(vs)) != len(vs):
            raise GameError("switch set contains two edges leaving one vertex")
        self.vertices = np.array(vs, dtype=np.int64)
        self.targets = np.array([int(u) for _, u in pairs], dtype=np.int64)

    @classmethod
    def from_targets(cls, targets: np.ndarray) -> "SwitchSet":
        s = cls.__new__(cls)
        s.vertices = np.flatnonzero(targets >= 0)
        s.targets = targets[s.vertices]
        return s

    def __len__(self):
        return len(self.vertices)

    def __bool__(self):
        return len(self.vertices) > 0

    def __iter__(self):
        return iter(zip(self.vertices.tolist(), self.targets.tolist()))

    def as_dict(self) -> dict[int, int]:
        return dict(self)

    def __eq__(self, other):
        if isinstance(other, SwitchSet):
            other = other.as_dict()
        elif not isinstance(other, dict):
            other = dict(other)
        return self.as_dict() == other

    __hash__ = None

    def __repr__(self):
        return f"SwitchSet({sorted(self)})"


def switch_targets(game: AugmentedGame, player: int, choice, vals, workers: int = 1) -> np.ndarray:
    """Per-vertex greedy target for ``player`` (-1 where nothing is strictly better)."""
    out = np.full(game.num_vertices, -1, dtype=np.int64)
    impl = _kernels.impl
    top = vals.top.view(np.uint8)
    counts = np.ascontiguousarray(vals.counts)
    run_chunks(
        lambda lo, hi: impl.switch_targets(game.ptr, game.succ, game.owner, player, choice,
                                           counts, top, game.parity_sign, out, lo, hi),
        game.n, workers, 4096,
    )
    return out


def apply_switches(sp: StrategyPair, switches: SwitchSet, side: int) -> StrategyPair:
    """``sp`` with every edge of ``switches`` taken; ``side`` names the switching player."""
    game = sp.game
    if len(switches) == 0:
        return sp.copy()
    vs, ts = switches.vertices, switches.targets
    if len(np.unique(vs)) != len(vs):
        raise GameError("switch set contains two edges leaving one vertex")
    if (vs < 0).any() or (vs >= game.n).any():
        raise GameError("switch set names a vertex outside the game")
    wrong = vs[game.owner[vs] != side]
    if len(wrong):
        raise GameError(f"vertex {int(wrong[0])} is not owned by player {side}")
    for v, u in switches:
        if u not in game.succ[game.ptr[v]:game.ptr[v + 1]]:
            raise GameError(f"({v}, {u}) is not an edge")
    out = sp.copy()
    out.choice[vs] = ts
    return out
