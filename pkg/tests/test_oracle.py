import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paritysi.errors import GameError
from paritysi.game import EVEN, ODD, NO_CHOICE, Solution
from paritysi.oracle import (
    GeneratorSpec,
    attractor,
    exhaustive_winners,
    gen_random_game,
    strategy_space,
    verify_solution,
    zielonka_solution,
    zielonka_solve,
)

from helpers import even_self_loop, g2, odd_self_loop, random_game


class TestAttractor:
    def test_g2(self):
        assert attractor(g2(), EVEN, {1}) == {0, 1, 2}

    def test_empty(self):
        assert attractor(g2(), ODD, set()) == set()

    def test_everything(self):
        assert attractor(g2(), ODD, {0, 1, 2}) == {0, 1, 2}

    def test_opponent_needs_all_successors(self):
        # Odd at v1 can avoid v2 by going to v0
        assert attractor(g2(), EVEN, {2}) == {2}
        assert attractor(g2(), ODD, {2}) == {1, 2, 0}

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 100_000), st.sampled_from([EVEN, ODD]), st.data())
    def test_monotone_idempotent(self, seed, player, data):
        g = random_game(seed, n_range=(1, 30))
        small = set(data.draw(st.sets(st.integers(0, g.n - 1), max_size=g.n)))
        big = small | set(data.draw(st.sets(st.integers(0, g.n - 1), max_size=g.n)))
        a = attractor(g, player, small)
        assert small <= a <= attractor(g, player, big)
        assert attractor(g, player, a) == a


class TestZielonka:
    def test_g2(self):
        w_even, w_odd, strat = zielonka_solve(g2())
        assert w_even == {0, 1, 2} and not w_odd
        assert set(strat) == {0, 2}

    def test_odd_self_loop(self):
        assert zielonka_solve(odd_self_loop())[1] == {0}

    def test_even_self_loop(self):
        assert zielonka_solve(even_self_loop())[0] == {0}

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10**6))
    def test_verified(self, seed):
        g = random_game(seed)
        assert verify_solution(g, zielonka_solution(g)) is None

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_exhaustive(self, seed):
        g = random_game(seed, n_range=(1, 9), max_deg=3)
        if strategy_space(g, EVEN) * strategy_space(g, ODD) > 4096:
            return
        w_even, _, _ = zielonka_solve(g)
        expected = exhaustive_winners(g)
        assert w_even == {v for v in range(g.n) if expected[v] == EVEN}


class TestVerify:
    def test_g2_ok(self):
        sol = Solution.from_sets(3, [0, 1, 2], [], {0: 1, 2: 1})
        assert verify_solution(g2(), sol) is None

    def test_g2_flipped(self):
        sol = Solution.from_sets(3, [], [0, 1, 2], tau={1: 0})
        cex = verify_solution(g2(), sol)
        assert cex.kind == "cycle" and cex.player == ODD
        assert cex.priority == 2 and sorted(cex.vertices) == [0, 1]

    def test_empty_odd_region(self):
        sol = Solution.from_sets(1, [0], [], {0: 0})
        assert verify_solution(even_self_loop(), sol) is None

    def test_missing_strategy(self):
        sol = Solution.from_sets(3, [0, 1, 2], [], {0: 1})
        cex = verify_solution(g2(), sol)
        assert cex.kind == "strategy" and cex.vertices == [2]

    def test_escape(self):
        # Even's v0 at W_even, but Odd's v1 claimed for Odd: edge v0->v1 leaves
        sol = Solution.from_sets(3, [0, 2], [1], {0: 1, 2: 1}, {1: 0})
        cex = verify_solution(g2(), sol)
        assert cex.kind == "escape"

    def test_size_mismatch(self):
        sol = Solution(np.zeros(2, np.int8), np.full(2, NO_CHOICE), None)
        assert verify_solution(g2(), sol).kind == "cover"


class TestExhaustive:
    def test_g2(self):
        assert exhaustive_winners(g2()).tolist() == [EVEN, EVEN, EVEN]

    def test_limit(self):
        g = random_game(1, n_range=(40, 40))
        with pytest.raises(GameError):
            exhaustive_winners(g)


class TestGenerator:
    def test_deterministic(self):
        spec = GeneratorSpec(n=50, max_priority=6, max_degree=4, seed=3)
        assert gen_random_game(spec) == gen_random_game(spec)

    def test_single_vertex(self):
        g = gen_random_game(GeneratorSpec(n=1, max_priority=3, max_degree=1))
        assert g.successors(0) == [0]

    @pytest.mark.parametrize("kw", [
        {"n": 0, "max_priority": 2},
        {"n": 3, "max_priority": -1},
        {"n": 3, "max_priority": 2, "min_degree": 3, "max_degree": 2},
        {"n": 3, "max_priority": 2, "max_degree": 4},
    ])
    def test_infeasible(self, kw):
        with pytest.raises(GameError):
            gen_random_game(GeneratorSpec(**kw))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 200), st.integers(0, 9), st.integers(1, 5), st.integers(0, 10**6))
    def test_invariants(self, n, max_pri, max_deg, seed):
        max_deg = min(max_deg, n)
        min_deg = 1 + seed % max_deg
        g = gen_random_game(GeneratorSpec(n, max_pri, min_deg, max_deg, seed))
        deg = np.diff(g.ptr)
        assert g.n == n and deg.min() >= min_deg and deg.max() <= max_deg
        assert g.priority.max() <= max_pri
        for v in range(n):
            s = g.successors(v)
            assert len(set(s)) == len(s)

    def test_bulk_path_distinct(self):
        g = gen_random_game(GeneratorSpec(n=20_000, max_priority=8, min_degree=1, max_degree=6, seed=2))
        deg = np.diff(g.ptr)
        assert deg.min() >= 1 and deg.max() <= 6
        src = np.repeat(np.arange(g.n), deg)
        pairs = src * g.n + g.succ
        assert len(np.unique(pairs)) == len(pairs)
