"""Benchmark harness: repeated timed solves over a corpus and a config matrix.

Each game is parsed once and parse time is never counted. Every (game,
config) cell is solved ``reps`` times; the reported time is the arithmetic
mean. A cell with any repetition over the time limit is marked as a timeout
and left out of averages and totals. Iteration counts must be identical
across repetitions, since the solver is deterministic for a fixed seed.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ParityGameError, SolveTimeout
from .game import parse_pgsolver
from .solver import SolveConfig, solve_game

OK = "ok"
TIMEOUT = "timeout"
ERROR = "error"


@dataclass
class BenchCell:
    game: str
    config: str
    status: str = OK
    times_ms: list[float] = field(default_factory=list)
    major_iterations: int | None = None
    br_iterations: int | None = None
    message: str = ""

    @property
    def mean_ms(self) -> float | None:
        if self.status != OK or not self.times_ms:
            return None
        return statistics.fmean(self.times_ms)

    def to_record(self) -> dict:
        return {
            "game": self.game,
            "config": self.config,
            "status": self.status,
            "mean_ms": self.mean_ms,
            "times_ms": self.times_ms,
            "major_iterations": self.major_iterations,
            "br_iterations": self.br_iterations,
            "message": self.message,
        }


def parse_config(text: str, base: SolveConfig) -> SolveConfig:
    """``"si:listrank"``, ``"bellman-ford"`` or ``"si-reset:seq"`` on top of ``base``."""
    br, _, val = text.partition(":")
    return replace(base, br_method=br, val_backend=val or base.val_backend)


def config_label(cfg: SolveConfig) -> str:
    return f"{cfg.br_method}:{cfg.val_backend}"


def load_corpus(directory) -> dict:
    """Every regular file in ``directory`` that parses as a game, by file name.

    Files that fail to parse come back as the exception instead of a game.
    """
    games = {}
    for path in sorted(Path(directory).iterdir()):
        if not path.is_file():
            continue
        try:
            games[path.name] = parse_pgsolver(path.read_bytes())
        except ParityGameError as exc:
            games[path.name] = exc
    return games


def run_cell(name, game, cfg: SolveConfig, reps: int, timeout: float | None) -> BenchCell:
    cell = BenchCell(name, config_label(cfg))
    if isinstance(game, Exception):
        cell.status, cell.message = ERROR, str(game)
        return cell
    cfg = replace(cfg, time_limit=timeout)
    seen = set()
    for _ in range(reps):
        try:
            sol = solve_game(game, cfg)
        except SolveTimeout:
            cell.status = TIMEOUT
            cell.times_ms.clear()
            return cell
        except ParityGameError as exc:
            cell.status, cell.message = ERROR, f"{type(exc).__name__}: {exc}"
            return cell
        st = sol.stats
        cell.times_ms.append(st.total_time * 1000)
        seen.add((st.major_iterations, st.br_iterations))
        cell.major_iterations, cell.br_iterations = st.major_iterations, st.br_iterations
    if len(seen) > 1:
        cell.status = ERROR
        cell.message = f"iteration counts differ across repetitions: {sorted(seen)}"
    return cell


def run_bench(games: dict, configs: list[SolveConfig], reps: int = 3, timeout: float | None = 600.0,
              progress=None) -> list[BenchCell]:
    """Solve every game under every config; instances run one at a time."""
    cells = []
    for name, game in games.items():
        for cfg in configs:
            cell = run_cell(name, game, cfg, reps, timeout)
            cells.append(cell)
            if progress is not None:
                progress(cell)
    return cells


def format_table(cells: list[BenchCell]) -> str:
    """Per-instance rows, then per-config totals over instances every config finished."""
    rows = [("game", "config", "time_ms", "major", "br", "status")]
    for c in cells:
        rows.append((
            c.game, c.config,
            "-" if c.mean_ms is None else f"{c.mean_ms:.1f}",
            "-" if c.major_iterations is None or c.status == TIMEOUT else str(c.major_iterations),
            "-" if c.br_iterations is None or c.status == TIMEOUT else str(c.br_iterations),
            c.status if not c.message else f"{c.status} ({c.message})",
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = ["  ".join(v.ljust(w) for v, w in zip(r[:5], widths)) + "  " + r[5] for r in rows]

    configs = list(dict.fromkeys(c.config for c in cells))
    by_game: dict[str, dict[str, BenchCell]] = {}
    for c in cells:
        by_game.setdefault(c.game, {})[c.config] = c
    common = [g for g, row in by_game.items() if all(row.get(k) and row[k].status == OK for k in configs)]
    if configs and common:
        lines.append("")
        lines.append(f"totals over {len(common)} instance(s) solved by every config:")
        base = sum(by_game[g][configs[0]].br_iterations for g in common)
        for k in configs:
            br = sum(by_game[g][k].br_iterations for g in common)
            major = sum(by_game[g][k].major_iterations for g in common)
            ms = sum(by_game[g][k].mean_ms for g in common)
            ratio = f"{br / base:.2f}" if base else "-"
            lines.append(f"  {k}: major {major}, br {br} (x{ratio} vs {configs[0]}), time {ms:.1f} ms")
    return "\n".join(lines) + "\n"
