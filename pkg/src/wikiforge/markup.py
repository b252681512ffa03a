"""Wikitext markup removal: turn raw wiki markup into plain text."""

import re
from collections import Counter

__all__ = ["clean_markup"]

_COMMENT_RE = re.compile(r"<!--.*?-->", re.DOTALL)
_UNCLOSED_COMMENT_RE = re.compile(r"<!--.*$", re.DOTALL)
_REF_SELFCLOSE_RE = re.compile(r"<ref\b[^<>]*?/\s*>", re.IGNORECASE)
_REF_PAIR_RE = re.compile(r"<ref\b[^<>]*?>.*?</\s*ref\s*>", re.IGNORECASE | re.DOTALL)
_HTML_TAG_RE = re.compile(r"</?[A-Za-z][^<>]*?>")
_QUOTE_RUN_RE = re.compile(r"'{2,}")
# removed-link namespaces: media and organizational links carry no body text
_MEDIA_LINK_RE = re.compile(r"\[\[\s*:?\s*(?:file|image|category)\s*:", re.IGNORECASE)
_WIKILINK_RE = re.compile(r"\[\[([^\[\]|]*?)(?:\|([^\[\]]*?))?\]\]")
_EXT_LINK_RE = re.compile(r"\[(?:https?|ftp)://[^\s\]]*(?:\s+([^\]]*))?\]", re.IGNORECASE)
_HSPACE_RE = re.compile(r"[ \t\r\f\v]+")
_NL_SPACE_RE = re.compile(r" ?\n ?")
_NL_RUN_RE = re.compile(r"\n{2,}")

_MAX_TEMPLATE_DEPTH = 32


def _warn(warnings, reason):
    if warnings is not None:
        warnings[reason] += 1


def _strip_matched(text, opener, closer, warnings, reason):
    """Remove every opener...closer span, honoring nesting.

    An unclosed or over-deep span is dropped from its opening marker to the
    end of the fragment and counted as a warning.
    """
    if opener not in text:
        return text
    out = []
    pos = 0
    while True:
        start = text.find(opener, pos)
        if start == -1:
            out.append(text[pos:])
            break
        out.append(text[pos:start])
        depth = 1
        scan = start + len(opener)
        while depth > 0:
            next_open = text.find(opener, scan)
            next_close = text.find(closer, scan)
            if next_close == -1:
                depth = -1
                break
            if next_open != -1 and next_open < next_close:
                depth += 1
                scan = next_open + len(opener)
                if depth > _MAX_TEMPLATE_DEPTH:
                    depth = -1
                    break
            else:
                depth -= 1
                scan = next_close + len(closer)
        if depth != 0:
            _warn(warnings, reason)
            break
        pos = scan
    return "".join(out)


def _strip_media_links(text, warnings):
    """Remove [[File:...]], [[Image:...]] and [[Category:...]] links, caption and all."""
    out = []
    pos = 0
    while True:
        match = _MEDIA_LINK_RE.search(text, pos)
        if match is None:
            out.append(text[pos:])
            break
        out.append(text[pos : match.start()])
        depth = 1
        scan = match.end()
        while depth > 0:
            next_open = text.find("[[", scan)
            next_close = text.find("]]", scan)
            if next_close == -1:
                depth = -1
                break
            if next_open != -1 and next_open < next_close:
                depth += 1
                scan = next_open + 2
            else:
                depth -= 1
                scan = next_close + 2
        if depth != 0:
            _warn(warnings, "unclosed_link")
            break
        pos = scan
    return "".join(out)


def _rewrite_wikilinks(text):
    def repl(match):
        target, label = match.group(1), match.group(2)
        return target if label is None else label

    # nested links resolve innermost-first; every rewrite strictly shrinks
    # the text, so the loop terminates
    while True:
        rewritten = _WIKILINK_RE.sub(repl, text)
        if rewritten == text:
            return text
        text = rewritten


def _clean_once(text, warnings):
    text = _COMMENT_RE.sub("", text)
    if _UNCLOSED_COMMENT_RE.search(text):
        _warn(warnings, "unclosed_comment")
        text = _UNCLOSED_COMMENT_RE.sub("", text)
    text = _REF_SELFCLOSE_RE.sub("", text)
    text = _REF_PAIR_RE.sub("", text)
    text = _strip_matched(text, "{{", "}}", warnings, "unclosed_template")
    text = _strip_matched(text, "{|", "|}", warnings, "unclosed_table")
    text = _strip_media_links(text, warnings)
    text = _HTML_TAG_RE.sub("", text)
    text = _rewrite_wikilinks(text)
    text = _EXT_LINK_RE.sub(lambda m: m.group(1) or "", text)
    text = _QUOTE_RUN_RE.sub("", text)
    text = _HSPACE_RE.sub(" ", text)
    text = _NL_SPACE_RE.sub("\n", text)
    text = _NL_RUN_RE.sub("\n", text)
    return text.strip()


def clean_markup(fragment: str, warnings: Counter | None = None) -> str:
    """Strip wiki markup from a fragment, leaving deterministic plain text.

    Removes comments, refs, templates, tables, media links and HTML tags;
    rewrites internal and external links to their visible label; collapses
    whitespace. Runs to a fixed point so the result is idempotent; no rule
    ever lengthens the text and none reverses another, so the loop terminates.
    """
    text = fragment
    while True:
        cleaned = _clean_once(text, warnings)
        if cleaned == text:
            return text
        text = cleaned
