"""
Strip wiki markup down to plain text
====================================

The cleaner keeps link anchors and formatting payloads, drops templates,
tables, comments and file embeds, and is idempotent: cleaning twice gives
the same string as cleaning once.
"""

from wikiforge.markup import clean_markup

FRAGMENTS = [
    "A [[piped link|anchor]] and a bare [[target]].",
    "Bold '''text''' and ''italics'' survive without quotes.",
    "Templates {{like|this}} and {{nested {{ones|x}} too}} vanish.",
    "A ref<ref>gone entirely</ref> disappears, tags <b>unwrap</b>.",
    "{| class=\"wikitable\"\n| tables go away\n|}\nText after stays.",
    "[[File:Photo.jpg|thumb|caption text]]Images vanish wholesale.",
]

for raw in FRAGMENTS:
    cleaned = clean_markup(raw)
    print("raw:    ", raw.replace("\n", "\\n"))
    print("cleaned:", cleaned.replace("\n", "\\n"))
    assert clean_markup(cleaned) == cleaned, "cleaning must be idempotent"
    print()

print("every fragment cleaned the same way twice")
