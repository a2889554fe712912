"""Command-line front end: ``paritysi solve | verify | bench | gen``.

Exit codes: 0 ok, 1 input error, 2 internal invariant violation,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import __version__
from .bench import format_table, load_corpus, parse_config, run_bench
from .errors import GameError, InvariantViolation, NotAdmissibleError, ParseError, SolveTimeout
from .game import parse_pgsolver, parse_solution, write_pgsolver, write_solution
from .oracle import GeneratorSpec, gen_random_game, verify_solution
from .solver import BR_METHODS, VAL_BACKENDS, SolveConfig, solve_game

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2
EXIT_VERIFY = 3


def _err(msg: str):
    print(f"paritysi: {msg}", file=sys.stderr)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text)


def _duration(text: str) -> float:
    m = re.fullmatch(r"\s*(\d+(?:\.\d*)?)\s*(ms|s|m|min|h)?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"invalid duration {text!r} (e.g. 600s, 10m, 1.5)")
    scale = {"ms": 1e-3, "s": 1, None: 1, "m": 60, "min": 60, "h": 3600}[m.group(2)]
    return float(m.group(1)) * scale


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _config(args) -> SolveConfig:
    return SolveConfig(
        br_method=args.br,
        val_backend=args.val,
        threads=args.threads,
        seed=args.seed,
        check_invariants=args.check_invariants,
        time_limit=getattr(args, "time_limit", None),
    )


def cmd_solve(args) -> int:
    try:
        game = parse_pgsolver(_read(args.input))
    except (OSError, ParseError, GameError) as exc:
        _err(f"{args.input}: {exc}")
        return EXIT_INPUT
    try:
        sol = solve_game(game, _config(args))
    except (InvariantViolation, NotAdmissibleError) as exc:
        _err(f"solver invariant violated: {exc}")
        return EXIT_INTERNAL
    except SolveTimeout as exc:
        _err(str(exc))
        return EXIT_INTERNAL
    _write(args.solution, write_solution(sol))
    record = json.dumps(sol.stats.to_record(), sort_keys=True)
    if args.stats is None:
        print(record, file=sys.stderr)
    else:
        _write(args.stats, record + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        game = parse_pgsolver(_read(args.game))
        sol = parse_solution(_read(args.solution))
    except (OSError, ParseError, GameError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    cex = verify_solution(game, sol)
    if cex is None:
        print("ok")
        return EXIT_OK
    print(f"counterexample ({cex.kind}): {cex}")
    return EXIT_VERIFY


def cmd_bench(args) -> int:
    base = SolveConfig(threads=args.threads, seed=args.seed)
    try:
        configs = [parse_config(c, base) for c in args.configs]
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
    if not Path(args.corpus).is_dir():
        _err(f"corpus {args.corpus} is not a directory")
        return EXIT_INPUT
    games = load_corpus(args.corpus)
    if not games:
        _err(f"corpus {args.corpus} is empty")
        return EXIT_INPUT

    def progress(cell):
        if args.verbose:
            _err(f"{cell.game} {cell.config}: {cell.status}")

    cells = run_bench(games, configs, args.reps, args.timeout, progress)
    _write(args.out, format_table(cells))
    if args.json:
        Path(args.json).write_text("".join(json.dumps(c.to_record()) + "\n" for c in cells))
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.n, args.max_pri, args.min_deg, args.max_deg, args.seed)
    try:
        game = gen_random_game(spec)
    except GameError as exc:
        _err(str(exc))
        return EXIT_INPUT
    _write(args.out, write_pgsolver(game))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paritysi", description="Parity game solver by strategy improvement.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a game in PGSolver format")
    s.add_argument("input_pos", nargs="?", metavar="GAME", help="input game (alternative to --input)")
    s.add_argument("--input", "-i", help="input game, '-' for stdin")
    s.add_argument("--br", choices=BR_METHODS, default="si", help="best-response method (default: si)")
    s.add_argument("--val", choices=VAL_BACKENDS, default="listrank", help="valuation backend (default: listrank)")
    s.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
    s.add_argument("--seed", type=int, default=0, help="list-ranking splitter seed")
    s.add_argument("--solution", "-o", help="solution output (default: stdout)")
    s.add_argument("--stats", help="stats record output (default: stderr)")
    s.add_argument("--time-limit", type=_duration, help="abort after this long (e.g. 600s)")
    s.add_argument("--check-invariants", action="store_true", help="assert solver invariants every iteration")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution against a game")
    v.add_argument("game")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time a config matrix over a corpus")
    b.add_argument("--corpus", required=True, help="directory of game files")
    b.add_argument("--configs", nargs="+", default=["si:listrank", "si-reset:listrank", "bellman-ford:listrank"],
                   metavar="BR[:VAL]", help="configs to compare; the first is the ratio baseline")
    b.add_argument("--reps", type=_positive, default=3)
    b.add_argument("--timeout", type=_duration, default=600.0)
    b.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", help="table output (default: stdout)")
    b.add_argument("--json", help="also write one JSON record per cell here")
    b.add_argument("--verbose", "-v", action="store_true")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="write a seeded random game")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--max-pri", type=int, required=True)
    g.add_argument("--min-deg", type=int, default=1)
    g.add_argument("--max-deg", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output file (default: stdout)")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve":
        if (args.input is None) == (args.input_pos is None):
            parser.error("solve needs exactly one of GAME or --input")
        args.input = args.input or args.input_pos
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
