import json

import numpy as np
import pytest

from irrepro import paper
from irrepro.cli import main
from irrepro.datasets import CACHE_ENV
from irrepro.measures import MeasureConfig, score_matrix
from irrepro.trecio import PoolFile, parse_matrix, serialize_pool, serialize_qrels, serialize_run

from conftest import synthetic_collection


@pytest.fixture(autouse=True)
def _no_env_cache(monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)


@pytest.fixture
def files(tmp_path):
    runs, qrels = synthetic_collection(seed=4)
    run_dir = tmp_path / "runs"
    run_dir.mkdir()
    for run in runs:
        (run_dir / run.run_id).write_text(serialize_run(run))
    (tmp_path / "qrels").write_text(serialize_qrels(qrels))
    other, _ = synthetic_collection(seed=5, n_topics=8)
    rep_dir = tmp_path / "rep"
    rep_dir.mkdir()
    for run in other[:2]:
        run = type(run)(f"rep-{run.run_id}", run.rankings)
        (rep_dir / run.run_id).write_text(serialize_run(run))
    return tmp_path, runs, qrels


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_leaderboard_consistent_with_matrix(files, capsys):
    root, runs, qrels = files
    code, out, _ = _run(capsys, "eval", "--runs", root / "runs", "--qrels", root / "qrels",
                        "--measure", "ndcg,q", "--matrix-dir", root / "mx")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "measure\trun\tmean_nDCG@10" and len(lines) == 2 * (len(runs) + 1)
    m = parse_matrix((root / "mx" / "ndcg@10.tsv").read_bytes())
    expected = score_matrix(runs, qrels, "ndcg", MeasureConfig(10))
    np.testing.assert_allclose(m.cells, expected.cells, atol=5e-7)
    board = {row.split("\t")[1]: float(row.split("\t")[2]) for row in lines[1:len(runs) + 1]}
    for run, mean in zip(expected.systems, expected.means()):
        assert board[run] == pytest.approx(mean, abs=5e-5)
    values = [board[r] for r in board]
    assert values == sorted(values, reverse=True)


def test_single_run_single_topic(tmp_path, capsys):
    (tmp_path / "runs").mkdir()
    (tmp_path / "runs" / "A").write_text("0001 Q0 d1 1 2.0 A\n0001 Q0 d2 2 1.0 A\n")
    (tmp_path / "qrels").write_text("0001 0 d2 L1\n")
    code, out, _ = _run(capsys, "eval", "--runs", tmp_path / "runs", "--qrels", tmp_path / "qrels", "--measure", "q")
    assert code == 0 and out == "measure\trun\tmean_Q@10\nq\tA\t0.6667\n"


def test_exit_codes(files, capsys, tmp_path):
    root, _, _ = files
    assert _run(capsys, "eval", "--runs", root / "runs", "--qrels", root / "qrels", "--measure", "map")[0] == 4
    (tmp_path / "bad").write_text("0001 0 d1\n")
    assert _run(capsys, "eval", "--runs", root / "runs", "--qrels", tmp_path / "bad")[0] == 3
    assert _run(capsys, "eval", "--runs", root / "runs", "--qrels", tmp_path / "missing")[0] == 5
    with pytest.raises(SystemExit) as exc:
        main(["eval"])
    assert exc.value.code == 2


def test_tukey_command_and_auto_seed(files, capsys):
    root, _, _ = files
    _run(capsys, "matrix", "--runs", root / "runs", "--qrels", root / "qrels", "--measure", "q")
    code, matrix_text, _ = _run(capsys, "matrix", "--runs", root / "runs", "--qrels", root / "qrels")
    (root / "m.tsv").write_text(matrix_text)
    code, out, _ = _run(capsys, "tukey", "--matrix", root / "m.tsv", "--trials", 1500, "--seed", 3)
    assert code == 0 and out.startswith("# randomised Tukey HSD\ttrials=1500\tseed=3\talpha=0.05\tV_E2=")
    assert "run_a\trun_b\tmean_diff\tp\tES_E2" in out
    code, out, err = _run(capsys, "tukey", "--matrix", root / "m.tsv", "--trials", 100)
    assert code == 0 and "no --seed given" in err
    assert "seed=" in out.splitlines()[0]


def test_compare_rankings(files, capsys):
    root, _, _ = files
    code, out, _ = _run(capsys, "compare-rankings", "--runs", root / "runs",
                        "--qrels", f"a={root / 'qrels'}", "--qrels", f"b={root / 'qrels'}")
    assert code == 0
    assert out.splitlines()[2] == "ndcg\ta\tb\t1.000\t1.000\t1.000"
    code, out, _ = _run(capsys, "compare-rankings", "--runs", root / "runs", "--qrels", f"a={root / 'qrels'}")
    assert code == 4
    code, out, _ = _run(capsys, "compare-rankings", "--runs", root / "runs", "--ci", "bootstrap", "--boot", 200,
                        "--seed", 1, "--qrels", f"a={root / 'qrels'}", "--qrels", f"b={root / 'qrels'}")
    assert code == 0 and out.startswith("# ci=bootstrap\tboot=200\tseed=1\n")


def test_bug_demo(tmp_path, capsys):
    (tmp_path / "pri").write_text(serialize_pool(PoolFile.from_docs("0001", "PRI", ["dA", "dB"])))
    (tmp_path / "rnd").write_text(serialize_pool(PoolFile.from_docs("0001", "RND", ["dB", "dA"], seed=1)))
    (tmp_path / "labels").write_text("0001 1 2\n0001 2 0\n")
    code, out, _ = _run(capsys, "bug-demo", "--pool", tmp_path / "pri", "--reference", tmp_path / "rnd",
                        "--labels", tmp_path / "labels")
    assert code == 0
    assert out == ("# topic=0001\tpool_size=2\tdivergent=2\n"
                   "doc_id\tlabel_by_docid\tlabel_by_rank_buggy\ndA\t2\t0\ndB\t0\t2\n")
    code, out, _ = _run(capsys, "bug-demo", "--pool", tmp_path / "pri", "--reference", tmp_path / "pri",
                        "--labels", tmp_path / "labels")
    assert code == 0 and "divergent=0" in out


def test_repro_command(files, capsys):
    root, _, _ = files
    args = ["repro", "--orig", root / "runs", "--rep", root / "rep", "--orig-a", "run0", "--orig-b", "run1",
            "--rep-a", "rep-run0", "--rep-b", "rep-run1", "--qrels", root / "qrels", "--measure", "ndcg,irbu"]
    code, out, _ = _run(capsys, *args)
    assert code == 0
    lines = out.splitlines()
    assert lines[1].startswith("ndcg\treproducibility\t") and lines[3].startswith("run\tktu@10\trbo@10(p=0.8)")
    code, out, _ = _run(capsys, *args, "--rep-qrels", root / "qrels")
    assert code == 0 and "\treplicability\t-\t-\t" in out


def test_config_file_supplies_defaults(files, capsys, tmp_path):
    root, _, _ = files
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"measure": "q", "cutoff": 5}))
    code, out, _ = _run(capsys, "--config", cfg, "eval", "--runs", root / "runs", "--qrels", root / "qrels")
    assert code == 0 and out.startswith("measure\trun\tmean_Q@5\n")
    code, out, _ = _run(capsys, "--config", cfg, "eval", "--runs", root / "runs", "--qrels", root / "qrels",
                        "--cutoff", 3)
    assert out.startswith("measure\trun\tmean_Q@3\n")
    cfg.write_text("{not json")
    assert _run(capsys, "--config", cfg, "eval", "--runs", root / "runs", "--qrels", root / "qrels")[0] == 3


@pytest.mark.parametrize("table", sorted(paper.TABLES))
def test_paper_tables_run_on_synthetic_data(table, paper_manifest, capsys):
    code, out, err = _run(capsys, "paper", table, "--manifest", paper_manifest, "--trials", 200, "--seed", 7,
                          "--boot", 100)
    assert code == 0, err
    assert out.startswith(f"# {table}\tseed=7\n") and len(out.splitlines()) > 2


def test_paper_unknown_artifact(tmp_path, capsys):
    (tmp_path / "m.json").write_text(json.dumps({"artifacts": {}}))
    assert _run(capsys, "paper", "www2-table1", "--manifest", tmp_path / "m.json")[0] == 5
