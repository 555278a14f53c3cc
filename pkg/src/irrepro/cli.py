"""irrepro command-line interface.

TSV goes to stdout, diagnostics to stderr. Exit codes::

    0  success
    2  usage error (argparse)
    3  malformed input file
    4  precondition violated (unknown measure, empty run set, mismatched pools, ...)
    5  I/O or network failure
    6  digest mismatch on a fetched artifact
"""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from pathlib import Path
from typing import Sequence

from . import paper
from .commands import bug_demo, cmd_eval, compare_rankings, tukey_report
from .datasets import CACHE_ENV, DatasetManifest, cmd_fetch
from .errors import DigestMismatch, FetchError, ParseError, PreconditionError
from .measures import MEASURES, MeasureConfig, score_matrix
from .repro import DEFAULT_RBO_P, Mode, ReproInput, kendall_tau_union, rbo, repro_report
from .trecio import (load_runs, parse_matrix, parse_pool, parse_qrels, parse_raw_labels, serialize_matrix,
                     write_tsv_report)

log = logging.getLogger("irrepro")

EXIT_PARSE, EXIT_PRECONDITION, EXIT_IO, EXIT_DIGEST = 3, 4, 5, 6


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _measures(value: str) -> list[str]:
    names = [v.strip().lower() for v in value.split(",") if v.strip()]
    for name in names:
        if name not in MEASURES:
            raise PreconditionError(f"unknown measure {name!r}; choose from {', '.join(MEASURES)}")
    return names


def _topics(value: str | None) -> list[str] | None:
    if value is None:
        return None
    path = Path(value)
    if path.is_file():
        return path.read_text(encoding="utf-8").split()
    return [t for t in value.split(",") if t]


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(63)
        log.warning("no --seed given; using %d", args.seed)
    return args.seed


def _manifest(args) -> DatasetManifest:
    return DatasetManifest.load(args.manifest, cache_root=args.cache_root)


def do_fetch(args) -> str:
    paths = cmd_fetch(_manifest(args), args.names)
    return write_tsv_report(sorted((n, str(p)) for n, p in paths.items()), ["artifact", "path"])


def do_eval(args) -> str:
    runs = load_runs(args.runs)
    qrels = parse_qrels(_read(args.qrels))
    board, matrices = cmd_eval(runs, qrels, _measures(args.measure),
                               MeasureConfig(args.cutoff, args.persistence), topics=_topics(args.topics))
    if args.matrix_dir:
        out = Path(args.matrix_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in matrices.items():
            (out / f"{name}@{args.cutoff}.tsv").write_text(text, encoding="utf-8", newline="\n")
    return board


def do_matrix(args) -> str:
    m = score_matrix(load_runs(args.runs), parse_qrels(_read(args.qrels)), _measures(args.measure)[0],
                     MeasureConfig(args.cutoff, args.persistence), topics=_topics(args.topics))
    return serialize_matrix(m)


def do_tukey(args) -> str:
    return tukey_report(parse_matrix(_read(args.matrix)), args.trials, _seed(args), args.alpha, args.workers)


def do_compare(args) -> str:
    variants = {}
    for item in args.qrels:
        name, sep, path = item.partition("=")
        if not sep:
            raise PreconditionError(f"--qrels expects NAME=PATH, got {item!r}")
        variants[name] = parse_qrels(_read(path))
    seed = _seed(args) if args.ci == "bootstrap" else 0
    head = f"# ci={args.ci}" + (f"\tboot={args.boot}\tseed={seed}" if args.ci == "bootstrap" else "") + "\n"
    return head + compare_rankings(variants, load_runs(args.runs), _measures(args.measure),
                                   MeasureConfig(args.cutoff, args.persistence), topics=_topics(args.topics),
                                   ci=args.ci, resamples=args.boot, seed=seed)


def do_bug_demo(args) -> str:
    pool = parse_pool(_read(args.pool))
    reference = parse_pool(_read(args.reference))
    raw = parse_raw_labels(_read(args.labels)).get(pool.topic_id)
    if raw is None:
        raise PreconditionError(f"no labels for topic {pool.topic_id}")
    return bug_demo(pool, reference, raw)


def do_repro(args) -> str:
    cfg = MeasureConfig(args.cutoff, args.persistence)
    orig_runs = load_runs(args.orig)
    rep_runs = load_runs(args.rep)
    by_id = {r.run_id: r for r in [*orig_runs, *rep_runs]}
    for rid in (args.orig_a, args.orig_b, args.rep_a, args.rep_b):
        if rid not in by_id:
            raise PreconditionError(f"run {rid} not found")
    qrels = parse_qrels(_read(args.qrels))
    rep_qrels = parse_qrels(_read(args.rep_qrels)) if args.rep_qrels else qrels
    mode = Mode.REPLICABILITY if args.rep_qrels else Mode.REPRODUCIBILITY
    results = {}
    for name in _measures(args.measure):
        mo = score_matrix([by_id[args.orig_a], by_id[args.orig_b]], qrels, name, cfg)
        mr = score_matrix([by_id[args.rep_a], by_id[args.rep_b]], rep_qrels, name, cfg,
                          topics=_topics(args.rep_topics))
        results[name] = ReproInput(mo.column(args.orig_a), mo.column(args.orig_b),
                                   mr.column(args.rep_a), mr.column(args.rep_b), mode)
    out = repro_report(results)
    if mode is Mode.REPRODUCIBILITY:
        rows = []
        for orig_id, rep_id in ((args.orig_a, args.rep_a), (args.orig_b, args.rep_b)):
            o, r = by_id[orig_id], by_id[rep_id]
            topics = [t for t in o.topics if t in r.rankings]
            ktu = [kendall_tau_union(o.docs(t), r.docs(t), args.cutoff) for t in topics]
            rb = [rbo(o.docs(t)[: args.cutoff], r.docs(t)[: args.cutoff], args.rbo_p) for t in topics]
            rows.append((rep_id, sum(ktu) / len(ktu), sum(rb) / len(rb)))
        out += write_tsv_report(rows, ["run", f"ktu@{args.cutoff}", f"rbo@{args.cutoff}(p={args.rbo_p})"])
    return out


def do_paper(args) -> str:
    opts = paper.Options(trials=args.trials, seed=_seed(args), workers=args.workers, ci=args.ci,
                         boot=args.boot, persistence=args.persistence)
    return f"# {args.table}\tseed={opts.seed}\n" + paper.run_table(args.table, _manifest(args), opts)


def _eval_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--measure", default="ndcg", help="comma-separated subset of ndcg,q,nerr,irbu")
    p.add_argument("--cutoff", type=int, default=10)
    p.add_argument("--persistence", type=float, default=0.99, help="iRBU persistence")
    p.add_argument("--topics", help="comma-separated topic ids, or a file of them")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irrepro", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of flag defaults")
    parser.add_argument("--cache-root", help=f"download cache (default ${CACHE_ENV} or ~/.cache/irrepro)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="download and cache dataset artifacts")
    p.add_argument("--manifest", required=True)
    p.add_argument("names", nargs="*")
    p.set_defaults(func=do_fetch)

    p = sub.add_parser("eval", help="leaderboards (and per-topic matrices) for a directory of runs")
    p.add_argument("--runs", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--matrix-dir", help="write <measure>@<cutoff>.tsv per-topic matrices here")
    _eval_flags(p)
    p.set_defaults(func=do_eval)

    p = sub.add_parser("matrix", help="per-topic score matrix for one measure")
    p.add_argument("--runs", required=True)
    p.add_argument("--qrels", required=True)
    _eval_flags(p)
    p.set_defaults(func=do_matrix)

    p = sub.add_parser("tukey", help="randomised Tukey HSD over a score matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=do_tukey)

    p = sub.add_parser("compare-rankings", help="Kendall's tau between system rankings of qrels variants")
    p.add_argument("--qrels", action="append", required=True, metavar="NAME=PATH")
    p.add_argument("--runs", required=True)
    p.add_argument("--ci", choices=["fisher", "bootstrap"], default="fisher")
    p.add_argument("--boot", type=int, default=10_000, help="bootstrap resamples")
    p.add_argument("--seed", type=int)
    _eval_flags(p)
    p.set_defaults(func=do_compare)

    p = sub.add_parser("bug-demo", help="labels that change under a rank-keyed join")
    p.add_argument("--pool", required=True, help="pool the assessor saw")
    p.add_argument("--reference", required=True, help="pool ordering the backend assumed")
    p.add_argument("--labels", required=True, help="topic pool_rank level")
    p.set_defaults(func=do_bug_demo)

    p = sub.add_parser("repro", help="reproducibility/replicability measures for an a-over-b run pair")
    p.add_argument("--orig", required=True, help="directory with the original runs")
    p.add_argument("--rep", required=True, help="directory with the reproduced runs")
    p.add_argument("--orig-a", required=True)
    p.add_argument("--orig-b", required=True)
    p.add_argument("--rep-a", required=True)
    p.add_argument("--rep-b", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--rep-qrels", help="qrels for replicated runs (switches to replicability)")
    p.add_argument("--rep-topics", help="topics of the replicated runs")
    p.add_argument("--rbo-p", type=float, default=DEFAULT_RBO_P)
    _eval_flags(p)
    p.set_defaults(func=do_repro)

    p = sub.add_parser("paper", help="recompute a published corrected table")
    p.add_argument("table", choices=sorted(paper.TABLES))
    p.add_argument("--manifest", required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--ci", choices=["fisher", "bootstrap"], default="fisher")
    p.add_argument("--boot", type=int, default=10_000)
    p.add_argument("--persistence", type=float, default=0.99)
    p.set_defaults(func=do_paper)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    defaults = json.loads(Path(known.config).read_text(encoding="utf-8"))
    parser.set_defaults(**{k.replace("-", "_"): v for k, v in defaults.items()})
    for action in parser._subparsers._group_actions:
        for sub in action.choices.values():
            dests = {a.dest for a in sub._actions}
            sub.set_defaults(**{k.replace("-", "_"): v for k, v in defaults.items()
                                if k.replace("-", "_") in dests})


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"irrepro: bad config file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    log.propagate = False
    try:
        out = args.func(args)
    except ParseError as exc:
        print(f"irrepro: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"irrepro: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except DigestMismatch as exc:
        print(f"irrepro: digest mismatch: {exc}", file=sys.stderr)
        return EXIT_DIGEST
    except (FetchError, OSError) as exc:
        print(f"irrepro: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(out)
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
