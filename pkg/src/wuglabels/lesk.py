"""Lexical-overlap cluster labeling.

The concatenated contexts of a cluster's usages are matched against every
candidate gloss of the lemma; the gloss sharing the most token types wins.
Overlap counts lowercased token TYPES; no stemming, no stopword removal.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from wuglabels.errors import LemmaNotInLexicon
from wuglabels.labels import ClusterLabel
from wuglabels.lexicon import Lexicon, Sense, senses_of
from wuglabels.wug import Cluster, WordUsageGraph


@dataclass(frozen=True)
class OverlapScore:
    sense_id: str
    score: int


def cluster_context(graph: WordUsageGraph, cluster: Cluster) -> list[str]:
    """All member usages' tokens, concatenated in ascending usage_id order."""
    tokens: list[str] = []
    for usage_id in sorted(cluster.member_ids):
        tokens.extend(graph.usages[usage_id].context_tokens)
    return tokens


def majority_pos(graph: WordUsageGraph, cluster: Cluster) -> str | None:
    """Most common POS among member usages; ties or no tags -> None."""
    counts = Counter(
        graph.usages[uid].pos
        for uid in cluster.member_ids
        if graph.usages[uid].pos is not None
    )
    if not counts:
        return None
    ranked = counts.most_common()
    if len(ranked) > 1 and ranked[0][1] == ranked[1][1]:
        return None
    return ranked[0][0]


def overlap_scores(
    context_tokens: list[str], candidates: list[Sense]
) -> list[OverlapScore]:
    context_types = {t.lower() for t in context_tokens}
    return [
        OverlapScore(
            sense_id=s.sense_id,
            score=len(context_types & {t.lower() for t in s.gloss_tokens}),
        )
        for s in candidates
    ]


def lesk_label(graph: WordUsageGraph, cluster: Cluster, lex: Lexicon) -> ClusterLabel:
    """Label a cluster with the candidate gloss of maximal lexical overlap.

    Ties (including the all-zero case) go to the earliest sense in lexicon
    order, mirroring a first-sense fallback.
    """
    pos = majority_pos(graph, cluster)
    candidates = senses_of(lex, graph.lemma, pos)
    if not candidates:
        raise LemmaNotInLexicon(f"lemma {graph.lemma!r} has no senses in the lexicon")
    scores = overlap_scores(cluster_context(graph, cluster), candidates)
    best_i = max(range(len(scores)), key=lambda i: (scores[i].score, -i))
    chosen = candidates[best_i]
    return ClusterLabel(
        lemma=graph.lemma,
        cluster_id=cluster.cluster_id,
        definition_text=chosen.gloss,
        definition_language=lex.language,
        method="lesk",
        sense_id=chosen.sense_id,
    )
