"""Hand-authored wikitext fixtures with their hand-drawn expected trees.

Shared by the unit tests and the acceptance suite. Every expected value here
was derived on paper from the attachment rule (each section attaches to the
nearest preceding shallower node), never from running the code.
"""

# name -> (title, wikitext, expected)
# expected: titles (preorder), parents (parallel), depths (parallel),
#           paths {node_id: title path}
TREE_FIXTURES = {
    "basic": (
        "T",
        "abs\n== A ==\nbodyA\n=== B ===\nbodyB\n== C ==\nbodyC",
        {
            "titles": ["T", "A", "B", "C"],
            "parents": [None, 0, 1, 0],
            "depths": [1, 2, 3, 2],
            "paths": {
                0: ["T"],
                1: ["T", "A"],
                2: ["T", "A", "B"],
                3: ["T", "C"],
            },
        },
    ),
    "root_only": (
        "Lonely",
        "just an abstract with no headings at all",
        {
            "titles": ["Lonely"],
            "parents": [None],
            "depths": [1],
            "paths": {0: ["Lonely"]},
        },
    ),
    "nine_sections": (
        "Solar power",
        "\n".join([
            "Lead text about sunlight and electricity.",
            "== Mainstream technologies ==", "m body",
            "=== Photovoltaic systems ===", "p body",
            "=== Concentrated solar power ===", "c body",
            "== Development and deployment ==", "d body",
            "=== Early days ===", "e body",
            "=== Growth by country ===", "g body",
            "== Economics ==", "econ body",
            "=== Cost trends ===", "cost body",
            "== Environmental effects ==", "env body",
        ]),
        {
            "titles": ["Solar power", "Mainstream technologies", "Photovoltaic systems",
                       "Concentrated solar power", "Development and deployment",
                       "Early days", "Growth by country", "Economics", "Cost trends",
                       "Environmental effects"],
            "parents": [None, 0, 1, 1, 0, 4, 4, 0, 7, 0],
            "depths": [1, 2, 3, 3, 2, 3, 3, 2, 3, 2],
            "paths": {
                0: ["Solar power"],
                1: ["Solar power", "Mainstream technologies"],
                2: ["Solar power", "Mainstream technologies", "Photovoltaic systems"],
                3: ["Solar power", "Mainstream technologies", "Concentrated solar power"],
                4: ["Solar power", "Development and deployment"],
                5: ["Solar power", "Development and deployment", "Early days"],
                6: ["Solar power", "Development and deployment", "Growth by country"],
                7: ["Solar power", "Economics"],
                8: ["Solar power", "Economics", "Cost trends"],
                9: ["Solar power", "Environmental effects"],
            },
        },
    ),
    "level_skip": (
        "T",
        "lead\n== A ==\na\n==== X ====\nx\n=== C ===\nc\n== D ==\nd",
        {
            "titles": ["T", "A", "X", "C", "D"],
            "parents": [None, 0, 1, 1, 0],
            "depths": [1, 2, 3, 3, 2],
            "paths": {
                0: ["T"],
                1: ["T", "A"],
                2: ["T", "A", "X"],
                3: ["T", "A", "C"],
                4: ["T", "D"],
            },
        },
    ),
    "deep_path": (
        "T",
        "lead\n== A ==\na\n=== B ===\nb\n==== C ====\nc\n== D ==\nd",
        {
            "titles": ["T", "A", "B", "C", "D"],
            "parents": [None, 0, 1, 2, 0],
            "depths": [1, 2, 3, 4, 2],
            "paths": {
                0: ["T"],
                1: ["T", "A"],
                2: ["T", "A", "B"],
                3: ["T", "A", "B", "C"],
                4: ["T", "D"],
            },
        },
    ),
}
