"""Compiled kernels vs the pure-Python fallback on one generated game.

    python3 benchmarks/bench_kernels.py --n 20000 --reps 3

Times each hot kernel and a full solve under both implementations and prints
the speedup. Results are checked to agree before any timing is reported.
"""

import argparse
import statistics
import time

import numpy as np

from paritysi import _kernels
from paritysi.best_response import best_response_bellman_ford
from paritysi.euler_rank import (build_euler_list, compute_valuation_parallel, compute_valuation_seq, rank_list,
                                valuations_from_ranks)
from paritysi.game import EVEN, augment_with_sink, preprocess_admissible
from paritysi.oracle import GeneratorSpec, gen_random_game
from paritysi.solver import SolveConfig, solve
from paritysi.strategy import switch_targets


def timed(fn, reps):
    out, times = None, []
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.fmean(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=20_000)
    p.add_argument("--max-pri", type=int, default=20)
    p.add_argument("--max-deg", type=int, default=4)
    p.add_argument("--threads", type=int, default=4)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    if "cython" not in _kernels.IMPLEMENTATIONS:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation` first")

    g = gen_random_game(GeneratorSpec(args.n, args.max_pri, 1, args.max_deg, args.seed))
    game, _ = preprocess_admissible(augment_with_sink(g))
    # a strategy pair from the middle of a real run has a realistic tree shape
    pairs = []
    solve(game, SolveConfig(val_backend="seq", threads=1),
          trace=lambda ev, pair, v: ev == "best_response" and pairs.append(pair.copy()))
    sp = pairs[len(pairs) // 2]
    vals = compute_valuation_seq(game, sp)
    lst = build_euler_list(game, sp)
    cfg = SolveConfig(br_method="si", val_backend="listrank", threads=args.threads, force_parallel=True)

    cases = {
        "valuation_seq": lambda: compute_valuation_seq(game, sp),
        "euler_list": lambda: build_euler_list(game, sp, args.threads),
        "rank_list": lambda: rank_list(lst, args.threads, 0).counts,
        "valuation_listrank": lambda: compute_valuation_parallel(game, sp, args.threads, 0, force=True),
        "switch_targets": lambda: switch_targets(game, EVEN, sp.choice, vals, args.threads),
        "bellman_ford": lambda: best_response_bellman_ford(game, sp).vals,
        "solve": lambda: solve(game, cfg).winner,
    }

    print(f"game: n={g.n} edges={g.num_edges} priorities={len(game.domain)} "
          f"inserted={game.inserted} threads={args.threads} reps={args.reps}")
    print(f"{'kernel':<20}{'cython ms':>12}{'python ms':>12}{'speedup':>10}")
    previous = _kernels.name
    try:
        for label, fn in cases.items():
            _kernels.use("cython")
            t_c, out_c = timed(fn, args.reps)
            _kernels.use("python")
            # the fallback is slow; one repetition is enough to see the gap
            t_p, out_p = timed(fn, 1 if label == "solve" else args.reps)
            if label == "euler_list":
                # splice order depends on thread interleaving; compare what the tours encode
                out_c, out_p = (valuations_from_ranks(x, rank_list(x)) for x in (out_c, out_p))
            same = out_c == out_p if not isinstance(out_c, np.ndarray) else np.array_equal(out_c, out_p)
            if not same:
                raise SystemExit(f"{label}: implementations disagree")
            print(f"{label:<20}{t_c * 1e3:>12.2f}{t_p * 1e3:>12.2f}{t_p / t_c:>9.1f}x")
    finally:
        _kernels.use(previous)


if __name__ == "__main__":
    main()
