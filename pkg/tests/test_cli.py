import json
import subprocess
import sys

import pytest

from paritysi.bench import format_table, parse_config, run_bench
from paritysi.cli import main
from paritysi.game import parse_pgsolver, write_pgsolver
from paritysi.solver import SolveConfig

from helpers import g2, random_game

G2_TEXT = "parity 2;\n0 2 0 1;\n1 1 1 0,2;\n2 4 0 1;\n"
G2_SOL = "paritysol 2;\n0 0 1;\n1 0;\n2 0 1;\n"


@pytest.fixture
def g2_file(tmp_path):
    p = tmp_path / "g2.gm"
    p.write_text(G2_TEXT)
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestSolve:
    def test_g2(self, capsys, g2_file):
        code, out, err = run(capsys, "solve", "--input", g2_file, "--threads", 2)
        assert code == 0 and out == G2_SOL
        stats = json.loads(err)
        assert stats["major_iterations"] == 2
        for key in ("vertices", "edges", "priorities", "br_iterations", "time_total_ms",
                    "time_valuation_ms", "config"):
            assert key in stats
        assert stats["config"] == {"br": "si", "val": "listrank", "threads": 2, "seed": 0}

    def test_files(self, capsys, g2_file, tmp_path):
        sol, stats = tmp_path / "out.sol", tmp_path / "stats.json"
        code, out, _ = run(capsys, "solve", g2_file, "--solution", sol, "--stats", stats)
        assert code == 0 and out == ""
        assert sol.read_text() == G2_SOL
        assert json.loads(stats.read_text())["vertices"] == 3

    def test_bellman_ford_differs_in_iterations(self, capsys, g2_file, tmp_path):
        records = []
        for br in ("si", "bellman-ford"):
            stats = tmp_path / f"{br}.json"
            code, out, _ = run(capsys, "solve", g2_file, "--br", br, "--val", "seq", "--stats", stats)
            assert code == 0 and out == G2_SOL
            records.append(json.loads(stats.read_text()))
        assert records[0]["br_iterations"] != records[1]["br_iterations"]

    def test_malformed(self, capsys, tmp_path):
        bad = tmp_path / "bad.gm"
        bad.write_text("0 2 0 ;")
        code, out, err = run(capsys, "solve", bad)
        assert code == 1 and out == "" and "line 1" in err

    def test_missing(self, capsys, tmp_path):
        code, out, _ = run(capsys, "solve", tmp_path / "none.gm")
        assert code == 1 and out == ""

    def test_needs_one_input(self, capsys, g2_file):
        with pytest.raises(SystemExit):
            main(["solve", str(g2_file), "--input", str(g2_file)])

    def test_bad_threads(self, g2_file):
        with pytest.raises(SystemExit):
            main(["solve", str(g2_file), "--threads", "0"])


class TestVerify:
    def test_ok(self, capsys, g2_file, tmp_path):
        sol = tmp_path / "g2.sol"
        sol.write_text(G2_SOL)
        code, out, _ = run(capsys, "verify", g2_file, sol)
        assert code == 0 and out.strip() == "ok"

    def test_flipped(self, capsys, g2_file, tmp_path):
        sol = tmp_path / "bad.sol"
        sol.write_text("paritysol 2;\n0 1;\n1 1 0;\n2 1;\n")
        code, out, _ = run(capsys, "verify", g2_file, sol)
        assert code == 3 and "cycle" in out

    def test_missing_file(self, capsys, g2_file, tmp_path):
        code, _, _ = run(capsys, "verify", g2_file, tmp_path / "none.sol")
        assert code == 1


class TestGen:
    def test_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.gm", tmp_path / "b.gm"
        for p in (a, b):
            assert run(capsys, "gen", "--n", 5, "--max-pri", 4, "--seed", 7, "--out", p)[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert parse_pgsolver(a.read_bytes()).n == 5

    def test_infeasible(self, capsys):
        code, out, _ = run(capsys, "gen", "--n", 3, "--max-pri", 2, "--min-deg", 3, "--max-deg", 2)
        assert code == 1 and out == ""

    def test_stdout(self, capsys):
        code, out, _ = run(capsys, "gen", "--n", 4, "--max-pri", 3)
        assert code == 0 and parse_pgsolver(out).n == 4


class TestBench:
    def test_mean_of_reps(self):
        cells = run_bench({"g2": g2()}, [SolveConfig(threads=1)], reps=3, timeout=None)
        (cell,) = cells
        assert cell.status == "ok" and len(cell.times_ms) == 3
        assert cell.mean_ms == pytest.approx(sum(cell.times_ms) / 3)
        assert (cell.major_iterations, cell.br_iterations) == (2, 2)

    def test_timeout_excluded(self):
        game = random_game(3, n_range=(300, 300))
        cells = run_bench({"big": game, "g2": g2()}, [SolveConfig(threads=1)], reps=2, timeout=0.0)
        assert cells[0].status == "timeout" and cells[0].mean_ms is None
        table = format_table(cells)
        assert "timeout" in table

    def test_table_totals(self):
        games = {"g2": g2(), "r": random_game(8, n_range=(30, 30))}
        base = SolveConfig(threads=1, val_backend="seq")
        cfgs = [parse_config(c, base) for c in ("si", "si-reset", "bellman-ford")]
        table = format_table(run_bench(games, cfgs, reps=1, timeout=None))
        assert "totals over 2 instance(s)" in table
        assert "si:seq: major" in table and "bellman-ford:seq" in table

    def test_nondeterminism_flagged(self, monkeypatch):
        import paritysi.bench as bench
        real = bench.solve_game
        calls = []

        def flaky(game, cfg):
            sol = real(game, cfg)
            calls.append(1)
            sol.stats.br_iterations += len(calls)
            return sol

        monkeypatch.setattr(bench, "solve_game", flaky)
        (cell,) = run_bench({"g2": g2()}, [SolveConfig(threads=1)], reps=2, timeout=None)
        assert cell.status == "error" and "differ" in cell.message

    def test_cli(self, capsys, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        (corpus / "g2.gm").write_text(G2_TEXT)
        (corpus / "r.gm").write_text(write_pgsolver(random_game(4)))
        (corpus / "broken.gm").write_text("garbage")
        out_json = tmp_path / "cells.jsonl"
        code, out, _ = run(capsys, "bench", "--corpus", corpus, "--configs", "si:seq", "bellman-ford:seq",
                           "--reps", 2, "--timeout", "60s", "--json", out_json)
        assert code == 0
        assert "broken.gm" in out and "error" in out
        recs = [json.loads(line) for line in out_json.read_text().splitlines()]
        assert len(recs) == 6 and {r["config"] for r in recs} == {"si:seq", "bellman-ford:seq"}

    def test_bad_corpus(self, capsys, tmp_path):
        assert run(capsys, "bench", "--corpus", tmp_path / "nope")[0] == 1

    def test_bad_config(self, capsys, tmp_path):
        assert run(capsys, "bench", "--corpus", tmp_path, "--configs", "magic")[0] == 1


def test_module_entry_point(g2_file):
    res = subprocess.run([sys.executable, "-m", "paritysi", "solve", str(g2_file), "--stats", "-"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith(G2_SOL)
