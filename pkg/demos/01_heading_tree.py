"""
Build a heading tree from one article
=====================================

Every article becomes a tree: the root carries the title and abstract,
and each heading becomes a child of the nearest shallower heading.
"""

from wikiforge.sections import parse_article
from wikiforge.tree import build_tree

# A small article with three heading levels. Level counts the '=' pairs,
# so '== Design ==' is level 2 and '=== Hull ===' is level 3.
WIKITEXT = """\
The '''windmill ship''' is a vessel driven by a rotor instead of sails.

== Design ==
The rotor replaces the rig entirely.

=== Hull ===
Most hulls are borrowed from conventional sloops.

=== Rotor ===
A vertical-axis rotor feeds a screw through a gearbox.

== History ==
Trials ran through the 1980s.

== See also ==
* [[Rotor ship]]

== References ==
* Ignored entirely.
"""

# parse_article cleans the markup, pulls the See Also targets out, and
# drops non-content sections such as References.
article = parse_article(1, "Windmill ship", WIKITEXT)
print("abstract:", article.abstract)
print("see also:", article.see_also)
print()

tree = build_tree(article.article_id, article.title, article.abstract,
                  article.sections)
print(tree.to_debug_text())
print()

# Each node knows its full title path; the root contributes the article
# title, so deeper nodes read like breadcrumb trails.
for node in tree.nodes:
    print(f"node {node.node_id}: {' / '.join(tree.path_titles(node.node_id))}")
print()

# subtree_text concatenates a node's own content with everything below it,
# in document order.
design = next(n for n in tree.nodes if n.title == "Design")
print("subtree of 'Design':")
print(tree.subtree_text(design.node_id))
