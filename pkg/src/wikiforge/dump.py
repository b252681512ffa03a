"""Streaming readers for article sources: MediaWiki XML dumps and jsonl fixtures."""

import json
import sys
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

__all__ = ["RawArticle", "DumpError", "stream_articles", "stream_jsonl_articles",
           "open_article_stream"]


class DumpError(Exception):
    """Fatal problem with an article source."""


@dataclass
class RawArticle:
    """One dump page, verbatim: no cleaning applied to wikitext."""

    page_id: int
    title: str
    wikitext: str
    is_redirect: bool = False
    namespace: int = 0


class _CountingReader:
    """Byte-count wrapper so parse errors can report an offset."""

    def __init__(self, raw):
        self._raw = raw
        self.bytes_read = 0

    def read(self, size=-1):
        chunk = self._raw.read(size)
        self.bytes_read += len(chunk)
        return chunk


def _localname(tag):
    return tag.rsplit("}", 1)[-1]


def _first_child_text(elem, name):
    for child in elem:
        if _localname(child.tag) == name:
            return child.text
    return None


def _page_to_article(page, warnings):
    title = _first_child_text(page, "title")
    if title is None or not title.strip():
        if warnings is not None:
            warnings["page_missing_title"] += 1
        return None
    ns_text = _first_child_text(page, "ns")
    namespace = int(ns_text) if ns_text and ns_text.strip() else 0
    id_text = _first_child_text(page, "id")
    page_id = int(id_text) if id_text and id_text.strip() else 0
    has_redirect = any(_localname(child.tag) == "redirect" for child in page)
    text = None
    for child in page:
        if _localname(child.tag) == "revision":
            for sub in child:
                if _localname(sub.tag) == "text":
                    text = sub.text if sub.text is not None else ""
            break
    if text is None:
        if warnings is not None:
            warnings["page_missing_text"] += 1
        return None
    is_redirect = has_redirect or text.lstrip().lower().startswith("#redirect")
    return RawArticle(
        page_id=page_id,
        title=title.strip(),
        wikitext=text,
        is_redirect=is_redirect,
        namespace=namespace,
    )


def stream_articles(source, warnings: Counter | None = None):
    """Yield one RawArticle per <page>, in document order.

    Memory stays bounded by the largest single page: completed page elements
    are dropped from the element tree as soon as they are consumed. Pages
    without a revision text are skipped with a counted warning; malformed XML
    raises DumpError with the byte offset reached.
    """
    owned = None
    if isinstance(source, (str, Path)):
        owned = open(source, "rb")
        source = owned
    reader = _CountingReader(source)
    try:
        parser = ET.iterparse(reader, events=("start", "end"))
        root = None
        for event, elem in parser:
            if root is None:
                root = elem
                continue
            if event == "end" and _localname(elem.tag) == "page":
                article = _page_to_article(elem, warnings)
                if article is not None:
                    yield article
                root.clear()
    except ET.ParseError as exc:
        raise DumpError(
            f"malformed XML near byte {reader.bytes_read}: {exc}"
        ) from exc
    finally:
        if owned is not None:
            owned.close()


def stream_jsonl_articles(source, warnings: Counter | None = None):
    """Yield RawArticles from line-delimited {"title":..., "wikitext":...} records.

    Missing ids are assigned sequentially from 1 in file order.
    """
    owned = None
    if isinstance(source, (str, Path)):
        owned = open(source, "r", encoding="utf-8")
        source = owned
    try:
        next_id = 1
        for line_no, line in enumerate(source, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                title = record["title"]
                wikitext = record["wikitext"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DumpError(f"bad jsonl record on line {line_no}: {exc}") from exc
            page_id = int(record.get("id", next_id))
            next_id = max(next_id, page_id) + 1
            yield RawArticle(
                page_id=page_id,
                title=str(title).strip(),
                wikitext=str(wikitext),
                is_redirect=str(wikitext).lstrip().lower().startswith("#redirect"),
                namespace=int(record.get("ns", 0)),
            )
    finally:
        if owned is not None:
            owned.close()


def open_article_stream(path: str, fmt: str = "auto", warnings: Counter | None = None):
    """Dispatch a path (or '-' for stdin) to the right streaming reader."""
    if fmt == "auto":
        fmt = "jsonl" if path.endswith((".jsonl", ".ndjson")) else "xml"
    if path == "-":
        if fmt == "jsonl":
            return stream_jsonl_articles(sys.stdin, warnings)
        return stream_articles(sys.stdin.buffer, warnings)
    if fmt == "jsonl":
        return stream_jsonl_articles(path, warnings)
    return stream_articles(path, warnings)
