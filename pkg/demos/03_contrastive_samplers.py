"""
Four ways to mine query-document pairs from structure
=====================================================

Each sampler turns article structure into contrastive groups: one query,
one positive document, and hard negatives drawn from nearby structure.

  srr  query = title path of one child; positive = that child's body;
       negatives = its siblings' bodies
  rwi  query roles flipped: positive = the true title path of a section,
       negatives = forged paths over off-path subtitles, all paired with
       that section's body
  ati  query = article title; positive = the abstract; negatives = whole
       top-level sections
  ltm  query = article text; positive = a See Also neighbor's text;
       negatives = articles it does not link
"""

from wikiforge.samplers import (SamplerConfig, derive_rng, sample_ati,
                                sample_ltm, sample_rwi, sample_srr)
from wikiforge.sections import parse_article
from wikiforge.graph import build_see_also_graph
from wikiforge.tree import build_tree

# Three tiny articles that link each other through See Also. Section bodies
# are padded to clear the minimum-content floor (10 words by default).
def body(topic: str) -> str:
    return (f"{topic} paragraph with enough plain words to count as real "
            "content for sampling purposes.")

ARTICLES = {
    1: ("Solar power", f"""\
{body('Overview of solar power')}

== Technology ==
{body('Technology survey')}

=== Photovoltaics ===
{body('Photovoltaic cells')}

=== Thermal collectors ===
{body('Thermal collector')}

== Economics ==
{body('Economics of deployment')}

== Storage ==
{body('Storage approaches')}

== See also ==
* [[Wind power]]
* [[Hydropower]]
"""),
    2: ("Wind power", f"""\
{body('Overview of wind power')}

== Turbines ==
{body('Turbine families')}

== See also ==
* [[Solar power]]
"""),
    3: ("Hydropower", f"""\
{body('Overview of hydropower')}

== Dams ==
{body('Dam construction')}
"""),
}

parsed = {aid: parse_article(aid, title, text)
          for aid, (title, text) in ARTICLES.items()}
trees = {aid: build_tree(aid, art.title, art.abstract, art.sections)
         for aid, art in parsed.items()}
graph = build_see_also_graph(
    (art.article_id, art.title, art.see_also) for art in parsed.values())
corpus = {aid: trees[aid].subtree_text(0) for aid in trees}

cfg = SamplerConfig()
seed = 7


def show(instance):
    print(f"  [{instance.task}] query: {instance.query[:60]!r}")
    print(f"        positive: {instance.positive[:60]!r}")
    for negative in instance.negatives:
        print(f"        negative: {negative[:60]!r}")
    print(f"        provenance: {instance.provenance}")


# Tree-local samplers run per article with an rng derived from
# (seed, article id, task), so articles never share random streams.
tree = trees[1]
print("srr groups for 'Solar power':")
for instance in sample_srr(tree, cfg, derive_rng(seed, 1, "srr")):
    show(instance)

print("\nrwi group (forged title paths against the real one):")
for instance in sample_rwi(tree, cfg, derive_rng(seed, 1, "rwi")):
    show(instance)

print("\nati group (abstract vs top-level sections):")
instance = sample_ati(tree, cfg, derive_rng(seed, 1, "ati"))
if instance is not None:
    show(instance)

print("\nltm groups (graph neighbors vs non-neighbors):")
for aid in sorted(corpus):
    for instance in sample_ltm(graph, corpus, aid, cfg,
                               derive_rng(seed, aid, "ltm")):
        show(instance)
