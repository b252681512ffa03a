"""Per-article structure tree built from the heading hierarchy."""

from dataclasses import dataclass

from .sections import Section

__all__ = ["TreeNode", "ArticleTree", "build_tree"]


@dataclass(frozen=True)
class TreeNode:
    """One heading of an article, plus the text directly under it.

    node_id is the preorder index (root = 0); depth starts at 1 at the root,
    so the title path to a node always has exactly `depth` entries.
    """

    node_id: int
    title: str
    content: str
    depth: int
    parent: int | None
    children: tuple[int, ...]


class ArticleTree:
    """Immutable heading tree: root holds the article title and abstract."""

    def __init__(self, article_id: int, nodes: list[TreeNode]):
        self.article_id = article_id
        self.nodes = tuple(nodes)

    def __len__(self):
        return len(self.nodes)

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def node(self, node_id: int) -> TreeNode:
        if not 0 <= node_id < len(self.nodes):
            raise ValueError(f"unknown node id {node_id}")
        return self.nodes[node_id]

    def path_ids(self, node_id: int) -> list[int]:
        """Node ids from the root down to node_id, inclusive."""
        node = self.node(node_id)
        path = [node.node_id]
        while node.parent is not None:
            node = self.nodes[node.parent]
            path.append(node.node_id)
        path.reverse()
        return path

    def path_titles(self, node_id: int) -> list[str]:
        """Titles from the root down to node_id; length equals the node's depth."""
        return [self.nodes[i].title for i in self.path_ids(node_id)]

    def subtree_text(self, node_id: int) -> str:
        """Preorder concatenation of a node's content and all its descendants'.

        Non-empty contents are joined by single newlines.
        """
        parts = []
        stack = [self.node(node_id)]
        while stack:
            node = stack.pop()
            if node.content:
                parts.append(node.content)
            stack.extend(self.nodes[c] for c in reversed(node.children))
        return "\n".join(parts)

    def non_root_ids(self) -> list[int]:
        return list(range(1, len(self.nodes)))

    def to_debug_text(self) -> str:
        """One line per node (depth, title, content word count), indented by depth."""
        lines = []
        for node in self.nodes:
            indent = "  " * (node.depth - 1)
            lines.append(f"{indent}{node.depth} {node.title} ({len(node.content.split())} words)")
        return "\n".join(lines)


def build_tree(article_id: int, title: str, abstract: str,
               sections: list[Section]) -> ArticleTree:
    """Fold an ordered section sequence into a tree by heading level.

    Each section attaches to the nearest preceding shallower node; a heading
    that skips levels attaches to the nearest shallower ancestor rather than
    getting synthetic intermediates. The root carries a sentinel level so
    top-level sections become its children.
    """
    fields = [{"title": title.strip(), "content": abstract, "depth": 1,
               "parent": None, "children": []}]
    stack = [(1, 0)]  # (wikitext heading level, node_id); root level is a sentinel
    for section in sections:
        while len(stack) > 1 and stack[-1][0] >= section.level:
            stack.pop()
        parent_id = stack[-1][1]
        node_id = len(fields)
        fields.append({"title": section.heading, "content": section.body,
                       "depth": fields[parent_id]["depth"] + 1,
                       "parent": parent_id, "children": []})
        fields[parent_id]["children"].append(node_id)
        stack.append((section.level, node_id))
    nodes = [
        TreeNode(node_id=i, title=f["title"], content=f["content"], depth=f["depth"],
                 parent=f["parent"], children=tuple(f["children"]))
        for i, f in enumerate(fields)
    ]
    return ArticleTree(article_id, nodes)
