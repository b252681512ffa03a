"""Synthesize contrastive retrieval training data from structured encyclopedia dumps."""

from .dump import DumpError, RawArticle, open_article_stream, stream_articles, stream_jsonl_articles
from .graph import SeeAlsoGraph, build_see_also_graph
from .markup import clean_markup
from .metrics import (Qrels, Ranking, RunFormatError, evaluate_run, mrr_at_k,
                      ndcg_at_k, parse_metric_spec, parse_qrels, parse_run_file)
from .pipeline import (CorpusStats, CorpusStore, PipelineConfig, normalize_tasks,
                       run_pipeline, stats_report, write_instances)
from .samplers import (TASKS, PseudoInstance, SamplerConfig, derive_rng, sample_ati,
                       sample_ltm, sample_rwi, sample_srr, truncate_words, word_count)
from .sections import (NON_CONTENT_HEADINGS, ParsedArticle, Section, extract_see_also,
                       is_disambiguation, normalize_title, parse_article, segment_sections,
                       split_raw_sections)
from .tree import ArticleTree, TreeNode, build_tree

__version__ = "0.1.0"

__all__ = [
    "DumpError", "RawArticle", "open_article_stream", "stream_articles",
    "stream_jsonl_articles",
    "SeeAlsoGraph", "build_see_also_graph",
    "clean_markup",
    "Qrels", "Ranking", "RunFormatError", "evaluate_run", "mrr_at_k", "ndcg_at_k",
    "parse_metric_spec", "parse_qrels", "parse_run_file",
    "CorpusStats", "CorpusStore", "PipelineConfig", "normalize_tasks",
    "run_pipeline", "stats_report", "write_instances",
    "TASKS", "PseudoInstance", "SamplerConfig", "derive_rng", "sample_ati",
    "sample_ltm", "sample_rwi", "sample_srr", "truncate_words", "word_count",
    "NON_CONTENT_HEADINGS", "ParsedArticle", "Section", "extract_see_also",
    "is_disambiguation", "normalize_title", "parse_article", "segment_sections",
    "split_raw_sections",
    "ArticleTree", "TreeNode", "build_tree",
]
