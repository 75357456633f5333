from pathlib import Path

import pytest

import main as cli
from bench_runner import BenchRunner, generate_corpus, list_corpus
from config import Config, SolverConfig
from formula import write_dimacs
from generators import Rnd3SatSpec, gen_binary, gen_rnd3sat
from results_manager import BENCH_HEADER, ResultsManager, compare_modes, mode_totals
from session_tracker import SessionTracker
from shrink import ShrinkMode


@pytest.fixture
def bench_config():
    cfg = Config()
    cfg.BENCH_WORKERS = 2
    cfg.BENCH_BATCH_SIZE = 4
    return cfg


def run_bench(bench_config, files, modes, csv_path, solver_config=None):
    results = ResultsManager(str(csv_path), BENCH_HEADER)
    session = SessionTracker()
    runner = BenchRunner(bench_config, solver_config or SolverConfig(), results, session)
    return runner.run(files, modes), results, session


def test_three_files_two_modes_six_rows(tmp_path, bench_config):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for seed in range(3):
        (corpus / f"r{seed}.cnf").write_text(write_dimacs(gen_rnd3sat(Rnd3SatSpec(n=8, seed=seed))))
    files = list_corpus(str(corpus))
    rows, results, session = run_bench(
        bench_config, files, [ShrinkMode.DYNAMIC, ShrinkMode.CONSERVATIVE], tmp_path / "out.csv")
    assert len(rows) == 6
    stored = results.read_rows()
    assert len(stored) == 6
    assert list(stored[0].keys()) == BENCH_HEADER
    assert {row["status"] for row in stored} <= {"complete", "unsat"}
    assert session.get_stats()["runs"] == 6


def test_failures_recorded_not_raised(tmp_path, bench_config):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "good.cnf").write_text(write_dimacs(gen_binary(4)))
    (corpus / "bad.cnf").write_text("p cnf 2 1\n1 9 0\n")
    (corpus / "empty_clause.cnf").write_text("p cnf 2 1\n0\n")
    rows, results, session = run_bench(
        bench_config, list_corpus(str(corpus)), [ShrinkMode.DYNAMIC], tmp_path / "out.csv")
    by_file = {row["file"]: row for row in results.read_rows()}
    assert by_file["bad.cnf"]["status"] == "error"
    assert "9" in by_file["bad.cnf"]["error"]
    assert by_file["empty_clause.cnf"]["status"] == "unsat"
    assert by_file["good.cnf"]["coverage"] == "9"
    assert session.get_stats()["error_count"] == 1


def test_binary_sweep_dynamic_never_worse_than_none(tmp_path, bench_config):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for n in range(10, 21, 2):
        (corpus / f"binary_n{n}.cnf").write_text(write_dimacs(gen_binary(n)))
    rows, _, _ = run_bench(
        bench_config, list_corpus(str(corpus)), [ShrinkMode.DYNAMIC, ShrinkMode.NONE], tmp_path / "out.csv")
    counts = {(row["file"], row["shrink_mode"]): int(row["partial_models"]) for row in rows}
    for n in range(10, 21, 2):
        name = f"binary_n{n}.cnf"
        assert counts[(name, "dynamic")] <= counts[(name, "none")] == 3 ** (n // 2)


def test_generate_corpus(tmp_path):
    written = generate_corpus(str(tmp_path), 5, seed=3, binary_max=6)
    names = sorted(p.name for p in written)
    assert len(written) == 5 + 3
    assert "binary_n6.cnf" in names
    assert "rnd3sat_n8_s3.cnf" in names
    assert sorted(list_corpus(str(tmp_path))) == sorted(written)


def test_list_corpus_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        list_corpus(str(tmp_path / "nope"))


def test_mode_totals_and_comparison():
    rows = [
        {"file": "a", "shrink_mode": "dynamic", "status": "complete", "partial_models": "3", "elapsed": "0.5"},
        {"file": "a", "shrink_mode": "conservative", "status": "complete", "partial_models": "4", "elapsed": "0.25"},
        {"file": "b", "shrink_mode": "dynamic", "status": "complete", "partial_models": "2", "elapsed": "0.5"},
        {"file": "b", "shrink_mode": "conservative", "status": "complete", "partial_models": "2", "elapsed": "0.25"},
        {"file": "c", "shrink_mode": "dynamic", "status": "error", "partial_models": "", "elapsed": ""},
    ]
    totals = mode_totals(rows)
    assert totals["dynamic"]["partial_models"] == 5
    assert totals["dynamic"]["errors"] == 1
    assert totals["conservative"]["elapsed"] == pytest.approx(0.5)
    assert compare_modes(rows) == {"wins": 1, "ties": 1, "losses": 0}


def test_bench_command_generates_corpus(tmp_path, monkeypatch, capsys):
    out = tmp_path / "bench.csv"
    code = cli.main(["bench", "--generate", "50", "--modes", "dynamic,conservative", "-o", str(out)])
    assert code == 0
    rows = ResultsManager(str(out), BENCH_HEADER).read_rows()
    assert len(rows) == (50 + 10) * 2
    assert all(row["status"] in ("complete", "unsat") for row in rows)
    for row in rows:
        assert row["coverage"].isdigit()
    err = capsys.readouterr().err
    assert "dynamic vs conservative" in err


def test_bench_without_corpus_requires_env(monkeypatch):
    monkeypatch.delenv("BENCH_CORPUS", raising=False)
    assert cli.main(["--quiet", "bench"]) == 3


def test_bench_reads_corpus_from_env(tmp_path, monkeypatch):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "b.cnf").write_text(write_dimacs(gen_binary(6)))
    monkeypatch.setenv("BENCH_CORPUS", str(corpus))
    out = tmp_path / "bench.csv"
    assert cli.main(["--quiet", "bench", "--modes", "none", "-o", str(out)]) == 0
    rows = ResultsManager(str(out), BENCH_HEADER).read_rows()
    assert [row["partial_models"] for row in rows] == ["27"]
    assert Path(rows[0]["file"]).name == "b.cnf"
