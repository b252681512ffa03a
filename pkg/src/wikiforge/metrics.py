"""Ranking metrics (MRR@k, nDCG@k) and TREC-style run/qrels parsing."""

import math
import re
from dataclasses import dataclass

__all__ = ["Ranking", "Qrels", "RunFormatError", "mrr_at_k", "ndcg_at_k",
           "parse_run_file", "parse_qrels", "evaluate_run", "parse_metric_spec"]


class RunFormatError(ValueError):
    """Malformed run or qrels input."""


@dataclass
class Ranking:
    """Scored documents for one query, descending score, ties by ascending doc id."""

    query_id: str
    entries: list[tuple[str, float]]

    @classmethod
    def from_scores(cls, query_id: str, scored: dict[str, float] | list[tuple[str, float]]):
        pairs = list(scored.items()) if isinstance(scored, dict) else list(scored)
        doc_ids = [doc_id for doc_id, _ in pairs]
        if len(doc_ids) != len(set(doc_ids)):
            raise RunFormatError(f"duplicate document in ranking for query {query_id}")
        pairs.sort(key=lambda e: (-e[1], e[0]))
        return cls(query_id=query_id, entries=pairs)


class Qrels:
    """Graded judgments; an unjudged (query, doc) pair has grade 0."""

    def __init__(self, grades: dict[tuple[str, str], int] | None = None):
        self._grades = dict(grades or {})
        self._by_query: dict[str, list[int]] = {}
        for (query_id, _), grade in self._grades.items():
            self._by_query.setdefault(query_id, []).append(grade)

    def grade(self, query_id: str, doc_id: str) -> int:
        return self._grades.get((query_id, doc_id), 0)

    def grades_for(self, query_id: str) -> list[int]:
        return list(self._by_query.get(query_id, []))

    def __len__(self):
        return len(self._grades)


def mrr_at_k(ranking: Ranking, qrels: Qrels, k: int) -> float:
    """1/rank of the first relevant (grade >= 1) document within the top k, else 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    for rank, (doc_id, _) in enumerate(ranking.entries[:k], start=1):
        if qrels.grade(ranking.query_id, doc_id) >= 1:
            return 1.0 / rank
    return 0.0


def ndcg_at_k(ranking: Ranking, qrels: Qrels, k: int) -> float:
    """Exponential-gain nDCG at cutoff k; 0 when the query has no relevant doc.

    Gain is 2^grade - 1 with a log2(rank + 1) discount; the ideal ranking is
    taken over all judged documents of the query.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    dcg = 0.0
    for rank, (doc_id, _) in enumerate(ranking.entries[:k], start=1):
        grade = qrels.grade(ranking.query_id, doc_id)
        if grade > 0:
            dcg += (2 ** grade - 1) / math.log2(rank + 1)
    ideal = sorted(qrels.grades_for(ranking.query_id), reverse=True)[:k]
    idcg = sum((2 ** g - 1) / math.log2(i + 2) for i, g in enumerate(ideal) if g > 0)
    if idcg == 0.0:
        return 0.0
    return dcg / idcg


def parse_run_file(text: str) -> list[Ranking]:
    """Parse "qid Q0 docid rank score tag" lines into per-query rankings.

    Entries are re-sorted by (-score, doc_id) regardless of the stated rank
    column; duplicate (qid, docid) pairs and malformed lines are errors.
    """
    scores: dict[str, dict[str, float]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise RunFormatError(f"run line {line_no}: expected 6 fields, got {len(parts)}")
        query_id, _, doc_id, _, score_text, _ = parts
        try:
            score = float(score_text)
        except ValueError as exc:
            raise RunFormatError(f"run line {line_no}: bad score {score_text!r}") from exc
        per_query = scores.setdefault(query_id, {})
        if doc_id in per_query:
            raise RunFormatError(f"run line {line_no}: duplicate document {doc_id!r} "
                                 f"for query {query_id!r}")
        per_query[doc_id] = score
    return [Ranking.from_scores(query_id, scores[query_id]) for query_id in sorted(scores)]


def parse_qrels(text: str) -> Qrels:
    """Parse "qid 0 docid grade" judgment lines."""
    grades: dict[tuple[str, str], int] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise RunFormatError(f"qrels line {line_no}: expected 4 fields, got {len(parts)}")
        query_id, _, doc_id, grade_text = parts
        try:
            grade = int(grade_text)
        except ValueError as exc:
            raise RunFormatError(f"qrels line {line_no}: bad grade {grade_text!r}") from exc
        if grade < 0:
            raise RunFormatError(f"qrels line {line_no}: negative grade")
        grades[(query_id, doc_id)] = grade
    return Qrels(grades)


_METRIC_SPEC_RE = re.compile(r"^(mrr|ndcg)@(\d+)$")


def parse_metric_spec(spec: str):
    match = _METRIC_SPEC_RE.match(spec.strip().lower())
    if match is None:
        raise ValueError(f"unknown metric {spec!r} (expected e.g. mrr@10, ndcg@100)")
    kind, k = match.group(1), int(match.group(2))
    if k < 1:
        raise ValueError(f"metric {spec!r} needs a cutoff of at least 1")
    return kind, k


def evaluate_run(rankings: list[Ranking], qrels: Qrels, metric_specs: list[str]):
    """Compute each metric per query and averaged over queries.

    Returns (aggregates, per_query): {metric: mean} and {metric: {qid: value}}.
    """
    functions = {"mrr": mrr_at_k, "ndcg": ndcg_at_k}
    aggregates: dict[str, float] = {}
    per_query: dict[str, dict[str, float]] = {}
    for spec in metric_specs:
        kind, k = parse_metric_spec(spec)
        values = {r.query_id: functions[kind](r, qrels, k) for r in rankings}
        per_query[spec] = values
        aggregates[spec] = sum(values.values()) / len(values) if values else 0.0
    return aggregates, per_query
