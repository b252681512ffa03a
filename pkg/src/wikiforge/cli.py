"""Command line front end: `forge run` and `forge score-run`."""

import argparse
import sys
from pathlib import Path

from .dump import DumpError
from .metrics import RunFormatError, evaluate_run, parse_metric_spec, parse_qrels, parse_run_file
from .pipeline import PipelineConfig, run_pipeline, stats_report
from .samplers import TASKS, SamplerConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forge",
        description="Synthesize contrastive retrieval training data from "
                    "structured encyclopedia dumps, and score ranking runs.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="synthesize per-task jsonl files from a dump")
    run_p.add_argument("--input", required=True,
                       help="dump path (.xml or .jsonl), or - for stdin")
    run_p.add_argument("--output", required=True, help="output directory")
    run_p.add_argument("--tasks", default=",".join(TASKS),
                       help="comma-separated subset of: " + ",".join(TASKS))
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--max-instances-per-task", type=int, default=None,
                       help="stop each task's file at this many lines")
    run_p.add_argument("--workers", type=int, default=1,
                       help="parallel article workers (output is identical at any count)")
    run_p.add_argument("--max-query-words", type=int, default=30)
    run_p.add_argument("--max-doc-words", type=int, default=480)
    run_p.add_argument("--ltm-max-doc-words", type=int, default=255)
    run_p.add_argument("--rwi-negatives", type=int, default=4)
    run_p.add_argument("--ltm-negatives", type=int, default=4)
    run_p.add_argument("--min-content-words", type=int, default=10)
    run_p.add_argument("--sag-symmetric", action="store_true",
                       help="treat cross-article links as undirected")

    score_p = sub.add_parser("score-run", help="evaluate a ranking run against judgments")
    score_p.add_argument("--run", required=True, help="run file (qid Q0 docid rank score tag)")
    score_p.add_argument("--qrels", required=True, help="judgments file (qid 0 docid grade)")
    score_p.add_argument("--metrics", default="mrr@10,mrr@100,ndcg@10,ndcg@100",
                         help="comma-separated, e.g. mrr@10,ndcg@100")
    score_p.add_argument("--per-query", action="store_true",
                         help="also print one line per query per metric")
    return parser


def _cmd_run(args) -> int:
    sampler = SamplerConfig(
        max_query_words=args.max_query_words,
        max_doc_words=args.max_doc_words,
        ltm_max_doc_words=args.ltm_max_doc_words,
        min_content_words=args.min_content_words,
        rwi_num_negatives=args.rwi_negatives,
        ltm_num_negatives=args.ltm_negatives,
        seed=args.seed,
    )
    config = PipelineConfig(
        tasks=tuple(part for part in args.tasks.split(",") if part.strip()),
        seed=args.seed,
        max_instances_per_task=args.max_instances_per_task,
        workers=args.workers,
        sampler=sampler,
        sag_symmetric=args.sag_symmetric,
    )
    _, stats = run_pipeline(args.input, args.output, config)
    print(stats_report(stats.to_dict()), file=sys.stderr)
    print(f"wall time: {stats.wall_time_seconds:.2f}s", file=sys.stderr)
    return 0


def _cmd_score_run(args) -> int:
    names = []
    for part in args.metrics.split(","):
        if not part.strip():
            continue
        kind, k = parse_metric_spec(part)
        names.append(f"{kind}@{k}")
    if not names:
        raise ValueError("no metrics requested")
    rankings = parse_run_file(Path(args.run).read_text(encoding="utf-8"))
    qrels = parse_qrels(Path(args.qrels).read_text(encoding="utf-8"))
    aggregates, per_query = evaluate_run(rankings, qrels, names)
    if args.per_query:
        for name in names:
            for query_id in sorted(per_query[name]):
                print(f"{name}\t{query_id}\t{per_query[name][query_id]:.4f}")
    for name in names:
        print(f"{name}\t{aggregates[name]:.4f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_score_run(args)
    except (DumpError, RunFormatError, ValueError, OSError) as exc:
        print(f"forge: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
