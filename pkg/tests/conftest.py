import json

import numpy as np
import pytest

from irrepro.trecio import Qrels, Run, serialize_qrels, serialize_run


def synthetic_collection(seed=0, n_runs=6, n_topics=8, n_docs=30, depth=15, max_level=4, prefix="t"):
    """Random runs over a shared doc space plus qrels judging everything any run retrieved."""
    rng = np.random.default_rng(seed)
    topics = [f"{prefix}{i:03d}" for i in range(n_topics)]
    labels = {}
    for t in topics:
        levels = rng.integers(0, max_level + 1, n_docs)
        levels[0] = max_level
        labels[t] = {f"{t}-d{j:02d}": int(v) for j, v in enumerate(levels)}
    runs = []
    for r in range(n_runs):
        scores = {}
        for t in topics:
            docs = rng.choice(n_docs, depth, replace=False)
            scores[t] = {f"{t}-d{j:02d}": float(depth - i) + float(rng.random()) * 0.5 for i, j in enumerate(docs)}
        runs.append(Run.from_scores(f"run{r}", scores))
    return runs, Qrels(labels, max_level)


@pytest.fixture
def collection():
    return synthetic_collection()


def _labels(rng, topics, n_docs, max_level):
    out = {}
    for t in topics:
        levels = rng.integers(0, max_level + 1, n_docs)
        levels[0] = max_level
        out[t] = {f"{t}-d{j:02d}": int(v) for j, v in enumerate(levels)}
    return out


def _write_runs(rng, directory, run_ids, topics, n_docs, depth=10):
    directory.mkdir(parents=True)
    for rid in run_ids:
        scores = {t: {f"{t}-d{j:02d}": float(depth - i) for i, j in enumerate(rng.choice(n_docs, depth, replace=False))}
                  for t in topics}
        (directory / rid).write_text(serialize_run(Run.from_scores(rid, scores)), encoding="utf-8")


def write_paper_fixture(root, seed=0, n_docs=20):
    """A small stand-in for the published data, laid out under ``root`` with a manifest."""
    from irrepro import paper, published

    rng = np.random.default_rng(seed)
    www2 = [*published.WWW2_MEANS["ndcg"]]
    www3 = [f"WWW3-R{i:02d}" for i in range(6)] + [published.KASYS_REP_A, published.KASYS_REP_B]
    all_topics = paper.WWW2_TOPICS + paper.WWW3_TOPICS
    _write_runs(rng, root / "www2-runs", www2, paper.WWW2_TOPICS, n_docs)
    _write_runs(rng, root / "www3-runs", www3, all_topics, n_docs)
    files = {
        "www2-qrels": Qrels(_labels(rng, paper.WWW2_TOPICS, n_docs, 4), 4),
        "www2-qrels-noisy": Qrels(_labels(rng, paper.WWW2_TOPICS, n_docs, 4), 4),
        "www2-qrels-null": Qrels(_labels(rng, paper.WWW2_TOPICS, n_docs, 2), 2),
        "www3-qrels": Qrels(_labels(rng, all_topics, n_docs, 4), 4),
        "www3-qrels-noisy": Qrels(_labels(rng, all_topics, n_docs, 4), 4),
        "www3-qrels-null": Qrels(_labels(rng, all_topics, n_docs, 4), 4),
    }
    gold = _labels(rng, paper.WWW3_TOPICS[:10], n_docs, 2)
    for who in ("gold", "waseda", "tsinghua"):
        labels = gold if who == "gold" else {
            t: {d: int(v) for d, v in zip(docs, rng.integers(0, 3, len(docs)))} for t, docs in gold.items()}
        files[f"www4-{who}-labels"] = Qrels(labels, 2)
    artifacts = {"www2-runs": {"path": "www2-runs"}, "www3-runs": {"path": "www3-runs"}}
    for name, q in files.items():
        (root / name).write_text(serialize_qrels(q), encoding="utf-8")
        artifacts[name] = {"path": name}
    manifest = root / "manifest.json"
    manifest.write_text(json.dumps({"cache_root": ".", "artifacts": artifacts}), encoding="utf-8")
    return manifest


@pytest.fixture(scope="session")
def paper_manifest(tmp_path_factory):
    return write_paper_fixture(tmp_path_factory.mktemp("paperdata"))


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if report.when == "setup" and report.skipped:
        _ACCEPTANCE[n] = (title, "SKIP")
    elif report.when == "call":
        _ACCEPTANCE[n] = (title, "SKIP" if report.skipped else "PASS" if report.passed else "FAIL")
    elif report.failed:
        _ACCEPTANCE[n] = (title, "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
