"""Heading-based segmentation of wikitext and See Also link extraction."""

import re
from collections import Counter
from dataclasses import dataclass, field

from .markup import clean_markup

__all__ = [
    "Section",
    "ParsedArticle",
    "split_raw_sections",
    "segment_sections",
    "extract_see_also",
    "normalize_title",
    "is_disambiguation",
    "parse_article",
    "NON_CONTENT_HEADINGS",
]

_HEADING_RE = re.compile(r"^(={1,6})[ \t]*(.+?)[ \t]*(={1,6})[ \t]*$")
_LINK_TARGET_RE = re.compile(r"\[\[([^\[\]|]+?)(?:\|[^\[\]]*?)?\]\]")
_DISAMBIG_RE = re.compile(r"\{\{\s*disambig", re.IGNORECASE)
_WS_RE = re.compile(r"\s+")

# citation apparatus, dropped from the content section list
NON_CONTENT_HEADINGS = frozenset(
    {"references", "external links", "further reading", "notes", "bibliography", "sources"}
)

_SEE_ALSO = "see also"


@dataclass
class Section:
    """One heading-delimited slice of an article.

    level counts the '=' pairs of the wikitext heading; body holds the text
    strictly between this heading and the next one (raw or cleaned depending
    on producer).
    """

    level: int
    heading: str
    body: str


@dataclass
class ParsedArticle:
    """A content article reduced to its tree-ready parts."""

    article_id: int
    title: str
    abstract: str
    sections: list[Section]
    see_also: list[str] = field(default_factory=list)


def split_raw_sections(wikitext: str, warnings: Counter | None = None):
    """Split wikitext at heading lines; bodies stay raw, headings get cleaned.

    Unbalanced heading markers ("== X ===") take the smaller marker count as
    the level and count a warning.
    """
    abstract_lines: list[str] = []
    headed: list[tuple[int, str, list[str]]] = []
    current = abstract_lines
    for line in wikitext.split("\n"):
        match = _HEADING_RE.match(line)
        if match is None:
            current.append(line)
            continue
        left, raw_title, right = match.groups()
        level = min(len(left), len(right))
        if len(left) != len(right) and warnings is not None:
            warnings["unbalanced_heading"] += 1
        heading = clean_markup(raw_title, warnings) or raw_title.strip()
        current = []
        headed.append((level, heading, current))
    sections = [
        Section(level=level, heading=heading, body="\n".join(lines))
        for level, heading, lines in headed
    ]
    return "\n".join(abstract_lines), sections


def segment_sections(wikitext: str, warnings: Counter | None = None):
    """Segment wikitext into a cleaned abstract and cleaned, ordered sections."""
    raw_abstract, raw_sections = split_raw_sections(wikitext, warnings)
    abstract = clean_markup(raw_abstract, warnings)
    sections = [
        Section(level=s.level, heading=s.heading, body=clean_markup(s.body, warnings))
        for s in raw_sections
    ]
    return abstract, sections


def normalize_title(title: str) -> str:
    """Normalize a link target or article title for cross-article matching."""
    title = title.split("#", 1)[0]
    title = _WS_RE.sub(" ", title.replace("_", " ")).strip()
    if not title:
        return ""
    return title[0].upper() + title[1:]


def extract_see_also(sections: list[Section]) -> list[str]:
    """Pull normalized link targets out of the See Also section, if present.

    Expects sections whose bodies are still raw markup. Duplicates are
    dropped, first occurrence wins.
    """
    titles: list[str] = []
    seen: set[str] = set()
    for section in sections:
        if section.heading.strip().lower() != _SEE_ALSO:
            continue
        for match in _LINK_TARGET_RE.finditer(section.body):
            title = normalize_title(match.group(1))
            if title and title not in seen:
                seen.add(title)
                titles.append(title)
        break
    return titles


def is_disambiguation(wikitext: str) -> bool:
    """Detect disambiguation pages by their marker template, before cleaning."""
    return _DISAMBIG_RE.search(wikitext) is not None


def parse_article(article_id: int, title: str, wikitext: str,
                  warnings: Counter | None = None) -> ParsedArticle:
    """Segment, clean and link-extract one content article.

    See Also targets are taken from the raw section bodies; non-content
    sections (references etc.) are then dropped from the section list.
    """
    raw_abstract, raw_sections = split_raw_sections(wikitext, warnings)
    see_also = extract_see_also(raw_sections)
    abstract = clean_markup(raw_abstract, warnings)
    sections = [
        Section(level=s.level, heading=s.heading, body=clean_markup(s.body, warnings))
        for s in raw_sections
        if s.heading.strip().lower() not in NON_CONTENT_HEADINGS
    ]
    return ParsedArticle(
        article_id=article_id,
        title=title.strip(),
        abstract=abstract,
        sections=sections,
        see_also=see_also,
    )
