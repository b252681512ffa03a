"""Corpus-level directed graph of See Also links."""

import random
from collections import Counter

from .sections import normalize_title

__all__ = ["SeeAlsoGraph", "build_see_also_graph"]


class SeeAlsoGraph:
    """Directed graph: an edge (a, b) means b is linked from a's See Also section."""

    def __init__(self, titles: dict[int, str], out_edges: dict[int, tuple[int, ...]],
                 in_edges: dict[int, tuple[int, ...]]):
        self._titles = titles
        self._out = out_edges
        self._in = in_edges
        self._vertex_ids = sorted(titles)

    def __len__(self):
        return len(self._titles)

    def vertex_ids(self) -> list[int]:
        return list(self._vertex_ids)

    def has_vertex(self, article_id: int) -> bool:
        return article_id in self._titles

    def title_of(self, article_id: int) -> str:
        self._check(article_id)
        return self._titles[article_id]

    def edge_count(self) -> int:
        return sum(len(v) for v in self._out.values())

    def _check(self, article_id):
        if article_id not in self._titles:
            raise ValueError(f"unknown article id {article_id}")

    def out_neighbors(self, article_id: int) -> list[int]:
        """Articles this one points to, ascending by id."""
        self._check(article_id)
        return list(self._out.get(article_id, ()))

    def in_neighbors(self, article_id: int) -> list[int]:
        self._check(article_id)
        return list(self._in.get(article_id, ()))

    def neighbors(self, article_id: int, symmetric: bool = False) -> list[int]:
        """Adjacency used for positives: out-links, or both directions if symmetric."""
        if not symmetric:
            return self.out_neighbors(article_id)
        merged = set(self.out_neighbors(article_id)) | set(self.in_neighbors(article_id))
        return sorted(merged)

    def sample_non_neighbors(self, article_id: int, k: int, rng: random.Random,
                             symmetric: bool = False) -> list[int]:
        """Draw k distinct ids uniformly from outside the node's neighborhood.

        Returns fewer than k (possibly none) when the candidate pool is small;
        deterministic for a given rng state.
        """
        self._check(article_id)
        excluded = set(self.neighbors(article_id, symmetric))
        excluded.add(article_id)
        candidates = [v for v in self._vertex_ids if v not in excluded]
        if not candidates:
            return []
        return rng.sample(candidates, min(k, len(candidates)))

    def edge_dump(self) -> str:
        """Sorted "source\ttarget" lines, one per edge, for golden comparisons."""
        lines = []
        for src in self._vertex_ids:
            for dst in self._out.get(src, ()):
                lines.append(f"{src}\t{dst}")
        return "\n".join(lines)


def build_see_also_graph(articles, warnings: Counter | None = None) -> SeeAlsoGraph:
    """Build the graph from (article_id, title, see_also_titles) records.

    Pass one registers every vertex; pass two resolves link titles against the
    title index. Unresolved targets, self-references and duplicate edges are
    dropped (unresolved ones counted). Duplicate titles keep the first id.
    """
    records = list(articles)
    title_index: dict[str, int] = {}
    titles: dict[int, str] = {}
    for article_id, title, _ in records:
        normalized = normalize_title(title)
        titles[article_id] = normalized
        if normalized in title_index:
            if warnings is not None:
                warnings["duplicate_title"] += 1
            continue
        title_index[normalized] = article_id

    out_edges: dict[int, tuple[int, ...]] = {}
    in_sets: dict[int, set[int]] = {}
    for article_id, _, see_also in records:
        targets: set[int] = set()
        for raw in see_also:
            target_id = title_index.get(normalize_title(raw))
            if target_id is None:
                if warnings is not None:
                    warnings["unresolved_see_also"] += 1
                continue
            if target_id == article_id:
                continue
            targets.add(target_id)
        if targets:
            out_edges[article_id] = tuple(sorted(targets))
            for target_id in targets:
                in_sets.setdefault(target_id, set()).add(article_id)
    in_edges = {k: tuple(sorted(v)) for k, v in in_sets.items()}
    return SeeAlsoGraph(titles, out_edges, in_edges)
