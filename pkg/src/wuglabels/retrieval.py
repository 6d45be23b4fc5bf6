"""Gloss retrieval labeling: embed usages, retrieve top-k glosses by dot
product over the whole inventory, and label each cluster with the gloss
retrieved for the most of its usages.

Includes the judgment-driven tuning of the retrieval depth k: the best k
minimizes the probability that two usages judged as entirely different
senses (pair score 1) end up with the same cluster definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import median
from typing import Iterable, Sequence

import numpy as np

from wuglabels.embeddings import EmbeddingProvider, embed_batch
from wuglabels.errors import DimMismatch, EmptyLexicon, NoJudgedPairs
from wuglabels.labels import ClusterLabel
from wuglabels.lexicon import Lexicon
from wuglabels.wug import Cluster, WordUsageGraph, eligible_clusters

DEFAULT_K_CANDIDATES = (1, 3, 10)


@dataclass(frozen=True)
class GlossIndex:
    """Dense gloss embeddings, one row per sense in lexicon order."""

    sense_ids: tuple[str, ...]
    vectors: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        if self.vectors.shape[0] != len(self.sense_ids):
            raise DimMismatch(
                f"{len(self.sense_ids)} senses but {self.vectors.shape[0]} vectors"
            )

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.sense_ids)


@dataclass(frozen=True)
class RetrievalResult:
    usage_id: str
    top_k: tuple[tuple[str, float], ...]  # (sense_id, dot score), descending


def _l2_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return matrix / norms


def build_index(
    lex: Lexicon, provider: EmbeddingProvider, normalize: bool = False
) -> GlossIndex:
    """Embed every gloss; row order matches lexicon sense order."""
    if len(lex) == 0:
        raise EmptyLexicon("cannot build a gloss index from an empty lexicon")
    vectors = embed_batch(provider, [s.gloss for s in lex.senses])
    if normalize:
        vectors = _l2_rows(vectors)
    return GlossIndex(
        sense_ids=tuple(s.sense_id for s in lex.senses),
        vectors=vectors,
        normalized=normalize,
    )


def retrieve(
    index: GlossIndex, usage_vector: np.ndarray, k: int, usage_id: str = ""
) -> RetrievalResult:
    """Exhaustive top-k by dot product, ties broken by index order."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    query = np.asarray(usage_vector, dtype=np.float64)
    if query.shape != (index.dim,):
        raise DimMismatch(f"query shape {query.shape}, index dim {index.dim}")
    scores = index.vectors @ query
    order = np.argsort(-scores, kind="stable")[: min(k, len(index))]
    return RetrievalResult(
        usage_id=usage_id,
        top_k=tuple((index.sense_ids[i], float(scores[i])) for i in order),
    )


def _usage_vectors(
    graph: WordUsageGraph,
    usage_ids: Sequence[str],
    index: GlossIndex,
    provider: EmbeddingProvider,
) -> np.ndarray:
    texts = [graph.usages[uid].context_text for uid in usage_ids]
    vectors = embed_batch(provider, texts)
    if index.normalized:
        vectors = _l2_rows(vectors)
    return vectors


def retrieval_label(
    graph: WordUsageGraph,
    cluster: Cluster,
    index: GlossIndex,
    provider: EmbeddingProvider,
    k: int,
    lex: Lexicon | None = None,
) -> ClusterLabel:
    """Label with the sense retrieved for the largest number of usages.

    A sense counts once per usage whose top-k contains it. Ties go to the
    higher summed dot score over those hits, then to index order.
    """
    member_ids = sorted(cluster.member_ids)
    vectors = _usage_vectors(graph, member_ids, index, provider)
    results = [
        retrieve(index, vectors[i], k, usage_id=uid)
        for i, uid in enumerate(member_ids)
    ]

    counts: dict[str, int] = {}
    score_sums: dict[str, float] = {}
    for res in results:
        for sense_id, score in res.top_k:
            counts[sense_id] = counts.get(sense_id, 0) + 1
            score_sums[sense_id] = score_sums.get(sense_id, 0.0) + score

    order = {sid: i for i, sid in enumerate(index.sense_ids)}
    best = max(
        counts, key=lambda sid: (counts[sid], score_sums[sid], -order[sid])
    )
    gloss = lex.sense(best).gloss if lex is not None else best
    language = lex.language if lex is not None else ""
    return ClusterLabel(
        lemma=graph.lemma,
        cluster_id=cluster.cluster_id,
        definition_text=gloss,
        definition_language=language,
        method="retrieval",
        sense_id=best,
        per_usage=tuple(
            {
                "usage_id": r.usage_id,
                "top_k": [[sid, score] for sid, score in r.top_k],
            }
            for r in results
        ),
    )


def label_eligible_clusters(
    graphs: Iterable[WordUsageGraph],
    index: GlossIndex,
    provider: EmbeddingProvider,
    k: int,
    lex: Lexicon | None = None,
    min_size: int = 3,
) -> list[ClusterLabel]:
    labels = []
    for graph in graphs:
        for cluster in eligible_clusters(graph, min_size):
            labels.append(retrieval_label(graph, cluster, index, provider, k, lex))
    return labels


def _different_sense_pairs(graph: WordUsageGraph) -> set[tuple[str, str]]:
    """Unordered usage pairs whose median judgment is exactly 1."""
    per_pair: dict[tuple[str, str], list[float]] = {}
    for j in graph.judgments:
        key = (min(j.usage_a, j.usage_b), max(j.usage_a, j.usage_b))
        per_pair.setdefault(key, []).append(j.score)
    return {pair for pair, scores in per_pair.items() if median(scores) == 1}


def same_label_probability(
    graphs: Sequence[WordUsageGraph],
    index: GlossIndex,
    provider: EmbeddingProvider,
    k: int,
    lex: Lexicon | None = None,
    min_size: int = 3,
) -> float:
    """P(two usages judged 'entirely different senses' share a definition).

    Each eligible cluster's label is assigned to all of its usages; pairs
    with an unlabeled endpoint (ineligible cluster) are excluded. Without a
    lexicon, labels compare by sense_id, which is equivalent whenever gloss
    texts are unique.
    """
    collisions = 0
    total = 0
    for graph in graphs:
        usage_label: dict[str, str] = {}
        for cluster in eligible_clusters(graph, min_size):
            label = retrieval_label(graph, cluster, index, provider, k, lex)
            for uid in cluster.member_ids:
                usage_label[uid] = label.definition_text
        for a, b in _different_sense_pairs(graph):
            if a in usage_label and b in usage_label:
                total += 1
                if usage_label[a] == usage_label[b]:
                    collisions += 1
    if total == 0:
        raise NoJudgedPairs(
            "no judged pair with median score 1 has both usages labeled"
        )
    return collisions / total


def tune_k(
    graphs: Sequence[WordUsageGraph],
    index: GlossIndex,
    provider: EmbeddingProvider,
    candidates: Sequence[int] = DEFAULT_K_CANDIDATES,
    lex: Lexicon | None = None,
    min_size: int = 3,
) -> int:
    """Pick the candidate k minimizing the collision probability; ties go
    to the smaller k."""
    best_k: int | None = None
    best_p = float("inf")
    for k in sorted(candidates):
        p = same_label_probability(graphs, index, provider, k, lex, min_size)
        if p < best_p:
            best_k, best_p = k, p
    assert best_k is not None
    return best_k
