"""Two-pass synthesis pipeline: stream articles, sample groups, write jsonl.

Pass one streams the dump once, runs the tree-local samplers per article and
(when long-text groups are requested) banks each article's plain text. Pass
two builds the cross-article link graph and samples the long-text groups
sequentially. Output is one jsonl file per task plus a manifest with line
counts and content hashes.
"""

import functools
import hashlib
import json
import os
import sqlite3
import tempfile
import time
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .dump import RawArticle, open_article_stream
from .graph import build_see_also_graph
from .samplers import (TASKS, SamplerConfig, derive_rng, sample_ati,
                       sample_ltm, sample_rwi, sample_srr)
from .sections import is_disambiguation, parse_article
from .tree import build_tree

__all__ = ["PipelineConfig", "CorpusStats", "CorpusStore", "normalize_tasks",
           "run_pipeline", "write_instances", "stats_report"]


def _default_workers() -> int:
    return os.cpu_count() or 1


def normalize_tasks(tasks) -> tuple[str, ...]:
    """Validate task names and return them in canonical order, deduplicated."""
    requested = set()
    for task in tasks:
        name = task.strip().lower()
        if name not in TASKS:
            raise ValueError(f"unknown task {task!r} (choose from {', '.join(TASKS)})")
        requested.add(name)
    if not requested:
        raise ValueError("no tasks requested")
    return tuple(t for t in TASKS if t in requested)


@dataclass
class PipelineConfig:
    """Everything that determines the produced dataset, plus execution knobs.

    `workers` and `corpus_spill_bytes` affect speed and memory only: task
    file bytes depend solely on the input and the data-shaping settings
    (tasks, seed, cap, sampler, sag_symmetric). A capped run may stop
    reading the stream early, so its gating counters alone can vary with
    worker count.
    """

    tasks: tuple[str, ...] = TASKS
    seed: int = 0
    max_instances_per_task: int | None = None
    workers: int = field(default_factory=_default_workers)
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    sag_symmetric: bool = False
    input_format: str = "auto"
    corpus_spill_bytes: int = 8 << 20


@dataclass
class CorpusStats:
    """Gating and production counters for one run."""

    articles_seen: int = 0
    articles_kept: int = 0
    redirects_skipped: int = 0
    disambiguation_skipped: int = 0
    namespace_skipped: int = 0
    empty_skipped: int = 0
    instances: Counter = field(default_factory=Counter)
    warnings: Counter = field(default_factory=Counter)
    wall_time_seconds: float = 0.0

    def to_dict(self) -> dict:
        """Counters only; wall time is reported separately so that two runs on
        the same input serialize identically."""
        return {
            "articles_seen": self.articles_seen,
            "articles_kept": self.articles_kept,
            "redirects_skipped": self.redirects_skipped,
            "disambiguation_skipped": self.disambiguation_skipped,
            "namespace_skipped": self.namespace_skipped,
            "empty_skipped": self.empty_skipped,
            "instances": dict(sorted(self.instances.items())),
            "warnings": dict(sorted(self.warnings.items())),
        }


class CorpusStore:
    """Article id -> plain text map that spills to sqlite past a byte budget.

    Texts live in a dict until their accumulated size crosses `spill_bytes`,
    then move to a temporary sqlite file so a large corpus never has to fit
    in memory. Reads are valid at any point; close() removes the spill file.
    """

    def __init__(self, spill_bytes: int = 8 << 20, spill_dir=None):
        self._mem: dict[int, str] = {}
        self._bytes = 0
        self._spill_bytes = spill_bytes
        self._spill_dir = spill_dir
        self._conn = None
        self._db_path = None
        self._pending: list[tuple[int, str]] = []

    def __len__(self):
        if self._conn is None:
            return len(self._mem)
        self._flush()
        return self._conn.execute("SELECT COUNT(*) FROM docs").fetchone()[0]

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def put(self, article_id: int, text: str):
        if self._conn is None:
            self._mem[article_id] = text
            self._bytes += len(text)
            if self._bytes > self._spill_bytes:
                self._spill()
        else:
            self._pending.append((article_id, text))
            if len(self._pending) >= 256:
                self._flush()

    def get(self, article_id: int) -> str | None:
        if self._conn is None:
            return self._mem.get(article_id)
        self._flush()
        row = self._conn.execute("SELECT text FROM docs WHERE id = ?",
                                 (article_id,)).fetchone()
        return row[0] if row else None

    def ids(self) -> list[int]:
        """All stored ids, ascending."""
        if self._conn is None:
            return sorted(self._mem)
        self._flush()
        return [r[0] for r in self._conn.execute("SELECT id FROM docs ORDER BY id")]

    def _spill(self):
        fd, path = tempfile.mkstemp(prefix="corpus-", suffix=".sqlite",
                                    dir=self._spill_dir)
        os.close(fd)
        self._db_path = path
        self._conn = sqlite3.connect(path)
        self._conn.execute("CREATE TABLE docs (id INTEGER PRIMARY KEY, text TEXT NOT NULL)")
        self._conn.executemany("INSERT OR REPLACE INTO docs VALUES (?, ?)",
                               self._mem.items())
        self._conn.commit()
        self._mem.clear()
        self._bytes = 0

    def _flush(self):
        if self._pending:
            self._conn.executemany("INSERT OR REPLACE INTO docs VALUES (?, ?)",
                                   self._pending)
            self._conn.commit()
            self._pending.clear()

    def close(self):
        if self._conn is not None:
            self._conn.close()
            self._conn = None
        if self._db_path is not None:
            try:
                os.unlink(self._db_path)
            except OSError:
                pass
            self._db_path = None


def _sample_pass1(raw: RawArticle, tasks: tuple[str, ...], seed: int,
                  sampler: SamplerConfig, keep_text: bool):
    """Per-article unit of work; module-level so it can cross process lines.

    A failure inside one article must not kill the run, so exceptions come
    back as a None payload for the caller to count and skip.
    """
    warnings: Counter = Counter()
    try:
        parsed = parse_article(raw.page_id, raw.title, raw.wikitext, warnings)
        tree = build_tree(parsed.article_id, parsed.title, parsed.abstract, parsed.sections)
        records: dict[str, list[dict]] = {}
        if "srr" in tasks:
            rng = derive_rng(seed, parsed.article_id, "srr")
            records["srr"] = [i.to_record() for i in sample_srr(tree, sampler, rng)]
        if "rwi" in tasks:
            rng = derive_rng(seed, parsed.article_id, "rwi")
            records["rwi"] = [i.to_record() for i in sample_rwi(tree, sampler, rng)]
        if "ati" in tasks:
            rng = derive_rng(seed, parsed.article_id, "ati")
            instance = sample_ati(tree, sampler, rng)
            records["ati"] = [instance.to_record()] if instance is not None else []
    except Exception:
        warnings["article_failed"] += 1
        return raw.page_id, None, warnings
    text = tree.subtree_text(0) if keep_text else None
    return raw.page_id, (parsed.title, parsed.see_also, text, records), warnings


def _ordered_map(func, items, workers: int):
    """Map preserving input order; a bounded window keeps memory flat."""
    if workers <= 1:
        for item in items:
            yield func(item)
        return
    window = max(2 * workers, 4)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        pending = deque()
        for item in items:
            pending.append(pool.submit(func, item))
            if len(pending) >= window:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()


class _InstanceWriter:
    """jsonl writer that tracks line count and a running content hash."""

    def __init__(self, path: Path):
        self.path = path
        self.lines = 0
        self._hash = hashlib.sha256()
        self._fh = open(path, "w", encoding="utf-8", newline="\n")

    def write(self, record: dict):
        data = json.dumps(record, ensure_ascii=False) + "\n"
        self._fh.write(data)
        self._hash.update(data.encode("utf-8"))
        self.lines += 1

    @property
    def sha256(self) -> str:
        return self._hash.hexdigest()

    def close(self):
        self._fh.close()


def write_instances(instances, sink) -> int:
    """Serialize instances as jsonl in a stable order; returns lines written.

    Instances are ordered by ascending article_id, preserving each article's
    own emission order. `sink` is an open text file or a path; writing to a
    path that fails midway removes the partial file before re-raising.
    """
    def _emit(fh):
        written = 0
        for instance in sorted(instances, key=lambda i: i.article_id):
            fh.write(json.dumps(instance.to_record(), ensure_ascii=False) + "\n")
            written += 1
        return written

    if hasattr(sink, "write"):
        return _emit(sink)
    path = Path(sink)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            return _emit(fh)
    except BaseException:
        path.unlink(missing_ok=True)
        raise


def _gate(stream, stats: CorpusStats):
    """Drop redirects, disambiguation pages, other namespaces and empty pages."""
    for raw in stream:
        stats.articles_seen += 1
        if raw.namespace != 0:
            stats.namespace_skipped += 1
            continue
        if raw.is_redirect:
            stats.redirects_skipped += 1
            continue
        if not raw.wikitext.strip():
            stats.empty_skipped += 1
            continue
        if is_disambiguation(raw.wikitext):
            stats.disambiguation_skipped += 1
            continue
        yield raw


def run_pipeline(input_path: str, output_dir, config: PipelineConfig):
    """Synthesize every requested task's jsonl into `output_dir`.

    Returns (manifest, stats). The manifest dict (also written to
    manifest.json) records only inputs that shape the data, so runs that
    differ in worker count, spill budget or wall time stay byte-identical.
    """
    started = time.monotonic()
    tasks = normalize_tasks(config.tasks)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stats = CorpusStats()
    cap = config.max_instances_per_task
    need_text = "ltm" in tasks
    pass1_tasks = tuple(t for t in tasks if t != "ltm")
    writers = {task: _InstanceWriter(out / f"{task}.jsonl") for task in tasks}
    graph_records: list[tuple[int, str, list[str]]] = []
    corpus = CorpusStore(spill_bytes=config.corpus_spill_bytes)
    worker = functools.partial(_sample_pass1, tasks=tasks, seed=config.seed,
                               sampler=config.sampler, keep_text=need_text)
    try:
        stream = open_article_stream(input_path, config.input_format, stats.warnings)
        for article_id, payload, warnings in _ordered_map(worker, _gate(stream, stats),
                                                          config.workers):
            stats.warnings.update(warnings)
            if payload is None:
                continue
            title, see_also, text, records = payload
            stats.articles_kept += 1
            if need_text:
                corpus.put(article_id, text)
                graph_records.append((article_id, title, see_also))
            for task in pass1_tasks:
                writer = writers[task]
                for record in records.get(task, ()):
                    if cap is not None and writer.lines >= cap:
                        break
                    writer.write(record)
            if (not need_text and cap is not None
                    and all(writers[t].lines >= cap for t in pass1_tasks)):
                break

        if need_text:
            graph = build_see_also_graph(graph_records, stats.warnings)
            writer = writers["ltm"]
            for article_id in corpus.ids():
                if cap is not None and writer.lines >= cap:
                    break
                rng = derive_rng(config.seed, article_id, "ltm")
                for instance in sample_ltm(graph, corpus, article_id, config.sampler,
                                           rng, config.sag_symmetric, stats.warnings):
                    if cap is not None and writer.lines >= cap:
                        break
                    writer.write(instance.to_record())
    except BaseException:
        for writer in writers.values():
            writer.close()
            writer.path.unlink(missing_ok=True)
        raise
    finally:
        corpus.close()

    for task, writer in writers.items():
        writer.close()
        stats.instances[task] = writer.lines
    stats.wall_time_seconds = time.monotonic() - started

    manifest = {
        "config": {
            "tasks": list(tasks),
            "seed": config.seed,
            "max_instances_per_task": cap,
            "sag_symmetric": config.sag_symmetric,
            "sampler": asdict(config.sampler),
        },
        "stats": stats.to_dict(),
        "outputs": {f"{task}.jsonl": {"lines": writers[task].lines,
                                      "sha256": writers[task].sha256}
                    for task in tasks},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                       encoding="utf-8")
    return manifest, stats


def stats_report(stats_dict: dict) -> str:
    """Small aligned table of a run's counters, for terminal display."""
    rows = [
        ("articles seen", stats_dict.get("articles_seen", 0)),
        ("articles kept", stats_dict.get("articles_kept", 0)),
        ("redirects skipped", stats_dict.get("redirects_skipped", 0)),
        ("disambiguation skipped", stats_dict.get("disambiguation_skipped", 0)),
        ("other-namespace skipped", stats_dict.get("namespace_skipped", 0)),
        ("empty skipped", stats_dict.get("empty_skipped", 0)),
    ]
    rows += [(f"instances[{task}]", count)
             for task, count in sorted(stats_dict.get("instances", {}).items())]
    rows += [(f"warnings[{name}]", count)
             for name, count in sorted(stats_dict.get("warnings", {}).items())]
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label.ljust(width)}  {count}" for label, count in rows)
