"""Contrastive pseudo query-document samplers over article trees and the link graph.

Four generators, one per pre-training task:

- srr: query is the title path to one section; its content competes against
  sibling sections under the same parent.
- rwi: roles inverted; one section body is the document, the true title path
  competes against shuffled-title queries.
- ati: the article title queries for the lead text against whole top-level
  section subtrees.
- ltm: an article's full text queries for a See Also neighbor's text against
  random non-neighbors.
"""

import copy
import random
from collections import Counter
from dataclasses import dataclass, field

from .graph import SeeAlsoGraph
from .tree import ArticleTree

__all__ = [
    "TASKS",
    "PseudoInstance",
    "SamplerConfig",
    "derive_rng",
    "truncate_words",
    "word_count",
    "sample_srr",
    "sample_rwi",
    "sample_ati",
    "sample_ltm",
]

TASKS = ("srr", "rwi", "ati", "ltm")
_TASK_INDEX = {task: i for i, task in enumerate(TASKS)}
_RWI_MAX_ATTEMPTS = 20


@dataclass
class PseudoInstance:
    """One contrastive training group: a query, its positive and its negatives.

    For rwi the roles are flipped: `query` is the one positive query and
    `negatives` hold the competing queries, while `positive` is the fixed
    document. Provenance records the node or article ids that produced the
    group.
    """

    task: str
    article_id: int
    query: str
    positive: str
    negatives: list[str]
    provenance: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "task": self.task,
            "article_id": self.article_id,
            "query": self.query,
            "positive": self.positive,
            "negatives": list(self.negatives),
            "provenance": copy.deepcopy(self.provenance),
        }

    @classmethod
    def from_record(cls, record: dict) -> "PseudoInstance":
        return cls(
            task=record["task"],
            article_id=record["article_id"],
            query=record["query"],
            positive=record["positive"],
            negatives=list(record["negatives"]),
            provenance=copy.deepcopy(record["provenance"]),
        )


@dataclass
class SamplerConfig:
    """Knobs shared by the four samplers; word caps are whitespace-token caps."""

    max_query_words: int = 30
    max_doc_words: int = 480
    ltm_max_doc_words: int = 255
    min_content_words: int = 10
    srr_max_negatives: int = 16
    rwi_num_negatives: int = 4
    ati_max_negatives: int = 8
    ltm_num_negatives: int = 4
    seed: int = 0


def derive_rng(seed: int, article_id: int, task: str) -> random.Random:
    """Per-article, per-task generator so worker scheduling cannot reorder draws."""
    base = (seed ^ hash(article_id)) & 0xFFFFFFFFFFFFFFFF
    return random.Random(base * len(TASKS) + _TASK_INDEX[task])


def word_count(text: str) -> int:
    return len(text.split())


def _has_min_words(text: str, floor: int) -> bool:
    """word_count(text) >= floor without splitting beyond `floor` tokens."""
    if floor <= 0:
        return True
    return len(text.split(None, floor - 1)) >= floor


def truncate_words(text: str, cap: int) -> str:
    """Cut to at most `cap` whitespace tokens; shorter text passes unchanged.

    The split stops after `cap` pieces so a huge text never materializes
    its full word list just to keep a short prefix.
    """
    pieces = text.split(None, cap)
    if len(pieces) <= cap:
        return text
    return " ".join(pieces[:cap])


def _finalize(task, article_id, query, positive, negatives, provenance):
    """Assemble an instance, enforcing the group invariants.

    Negatives equal to the positive, duplicates and empties are dropped;
    a group with no surviving negative is discarded.
    """
    query = query.strip()
    positive = positive.strip()
    if not query or not positive:
        return None
    kept = []
    seen = set()
    for negative in negatives:
        negative = negative.strip()
        if not negative or negative == positive or negative in seen:
            continue
        seen.add(negative)
        kept.append(negative)
    if not kept:
        return None
    return PseudoInstance(task=task, article_id=article_id, query=query,
                          positive=positive, negatives=kept, provenance=provenance)


def sample_srr(tree: ArticleTree, cfg: SamplerConfig, rng: random.Random) -> list[PseudoInstance]:
    """One sibling re-ranking group per internal node with >= 2 contentful children.

    The positive child is drawn uniformly; the remaining qualifying siblings
    become negatives, randomly subsampled past the cap.
    """
    instances = []
    for node in tree.nodes:
        if not node.children:
            continue
        qualifying = [c for c in node.children
                      if _has_min_words(tree.node(c).content, cfg.min_content_words)]
        if len(qualifying) < 2:
            continue
        positive_id = rng.choice(qualifying)
        others = [c for c in qualifying if c != positive_id]
        if len(others) > cfg.srr_max_negatives:
            others = rng.sample(others, cfg.srr_max_negatives)
        query = truncate_words(" ".join(tree.path_titles(positive_id)), cfg.max_query_words)
        positive = truncate_words(tree.node(positive_id).content, cfg.max_doc_words)
        negatives = [truncate_words(tree.node(c).content, cfg.max_doc_words) for c in others]
        instance = _finalize("srr", tree.article_id, query, positive, negatives,
                             {"node_ids": [node.node_id, positive_id, *others]})
        if instance is not None:
            instances.append(instance)
    return instances


def sample_rwi(tree: ArticleTree, cfg: SamplerConfig, rng: random.Random) -> list[PseudoInstance]:
    """Invert the roles: one section body, one true title-path query, fake queries.

    A fake query keeps the main title but swaps in depth-1 subtitles drawn from
    nodes off the chosen section's path. Articles too small to supply the
    required distinct fakes yield nothing.
    """
    non_root = tree.non_root_ids()
    if len(non_root) < cfg.rwi_num_negatives + 2:
        return []
    contentful = [i for i in non_root
                  if _has_min_words(tree.node(i).content, cfg.min_content_words)]
    if not contentful:
        return []
    chosen = rng.choice(contentful)
    path = set(tree.path_ids(chosen))
    pool = [i for i in non_root if i not in path]
    picks_needed = tree.node(chosen).depth - 1
    if len(pool) < picks_needed:
        return []
    positive_query = truncate_words(" ".join(tree.path_titles(chosen)), cfg.max_query_words)
    document = truncate_words(tree.node(chosen).content, cfg.max_doc_words)
    main_title = tree.root.title
    negatives = []
    negative_nodes = []
    seen = {positive_query}
    for _ in range(cfg.rwi_num_negatives):
        for _attempt in range(_RWI_MAX_ATTEMPTS):
            picked = rng.sample(pool, picks_needed)
            fake = " ".join([main_title] + [tree.node(i).title for i in picked])
            fake = truncate_words(fake, cfg.max_query_words)
            if fake not in seen:
                seen.add(fake)
                negatives.append(fake)
                negative_nodes.extend(picked)
                break
        else:
            return []
    instance = _finalize("rwi", tree.article_id, positive_query, document, negatives,
                         {"node_ids": [chosen, *negative_nodes]})
    return [instance] if instance is not None else []


def sample_ati(tree: ArticleTree, cfg: SamplerConfig, rng: random.Random) -> PseudoInstance | None:
    """Title queries for the lead text; negatives are whole top-level subtrees."""
    abstract = tree.root.content
    if not _has_min_words(abstract, cfg.min_content_words):
        return None
    candidates = [c for c in tree.root.children
                  if _has_min_words(tree.subtree_text(c), cfg.min_content_words)]
    if not candidates:
        return None
    if len(candidates) > cfg.ati_max_negatives:
        candidates = rng.sample(candidates, cfg.ati_max_negatives)
    query = truncate_words(tree.root.title, cfg.max_query_words)
    positive = truncate_words(abstract, cfg.max_doc_words)
    negatives = [truncate_words(tree.subtree_text(c), cfg.max_doc_words) for c in candidates]
    return _finalize("ati", tree.article_id, query, positive, negatives,
                     {"node_ids": [0, *candidates]})


def sample_ltm(graph: SeeAlsoGraph, corpus, article_id: int, cfg: SamplerConfig,
               rng: random.Random, symmetric: bool = False,
               warnings: Counter | None = None) -> list[PseudoInstance]:
    """One long-text group per qualifying See Also neighbor of an article.

    `corpus` maps article id to full plain text (anything with a .get).
    Negatives are drawn fresh per neighbor from outside the neighborhood;
    an empty pool or missing text skips the group with a counted warning.
    """
    text = corpus.get(article_id)
    if text is None or not text.strip():
        return []
    query = truncate_words(text, cfg.ltm_max_doc_words)
    instances = []
    for neighbor in graph.neighbors(article_id, symmetric):
        neighbor_text = corpus.get(neighbor)
        if neighbor_text is None:
            if warnings is not None:
                warnings["ltm_missing_neighbor_text"] += 1
            continue
        if not _has_min_words(neighbor_text, cfg.min_content_words):
            continue
        negative_ids = graph.sample_non_neighbors(article_id, cfg.ltm_num_negatives,
                                                  rng, symmetric)
        if not negative_ids:
            continue
        negatives = []
        kept_ids = []
        for negative_id in negative_ids:
            negative_text = corpus.get(negative_id)
            if negative_text is None:
                if warnings is not None:
                    warnings["ltm_missing_negative_text"] += 1
                continue
            negatives.append(truncate_words(negative_text, cfg.ltm_max_doc_words))
            kept_ids.append(negative_id)
        instance = _finalize("ltm", article_id, query,
                             truncate_words(neighbor_text, cfg.ltm_max_doc_words),
                             negatives, {"neighbor_id": neighbor, "negative_ids": kept_ids})
        if instance is not None:
            instances.append(instance)
    return instances
