from __future__ import annotations

from typing import Sequence

import numpy as np
import pytest

from wuglabels.wug import Cluster, PairJudgment, Usage, WordUsageGraph


def make_usage(usage_id: str, tokens: Sequence[str], lemma: str = "bank",
               target_index: int = 0, pos: str | None = None,
               grouping: str = "1", language: str = "en") -> Usage:
    return Usage(
        usage_id=usage_id,
        lemma=lemma,
        context_tokens=tuple(tokens),
        target_index=target_index,
        grouping=grouping,
        language=language,
        pos=pos,
    )


def make_graph(lemma: str = "bank", usages: Sequence[Usage] = (),
               clusters: Sequence[tuple[int, Sequence[str]]] = (),
               judgments: Sequence[tuple[str, str, str, float]] = (),
               language: str = "en", diachronic: bool = True,
               collection: str = "") -> WordUsageGraph:
    return WordUsageGraph(
        lemma=lemma,
        language=language,
        usages={u.usage_id: u for u in usages},
        judgments=tuple(PairJudgment(a, b, ann, s) for a, b, ann, s in judgments),
        clusters=tuple(
            Cluster(cluster_id=cid, member_ids=frozenset(members))
            for cid, members in clusters
        ),
        diachronic=diachronic,
        collection=collection,
    )


class FixedProvider:
    """Embedding provider backed by an explicit text -> vector table."""

    def __init__(self, table: dict[str, Sequence[float]]):
        self.table = {k: np.asarray(v, dtype=np.float64) for k, v in table.items()}
        self.dim = len(next(iter(self.table.values())))

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        return np.stack([self.table[t] for t in texts])


class RandomProvider:
    """Deterministic pseudo-random embeddings: one fixed vector per text."""

    def __init__(self, dim: int, seed: int = 0):
        self.dim = dim
        self.seed = seed

    def _vector(self, text: str) -> np.ndarray:
        import hashlib

        digest = hashlib.sha256(f"{self.seed}|{text}".encode()).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        return rng.normal(size=self.dim)

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        return np.stack([self._vector(t) for t in texts])


class UnitRandomProvider(RandomProvider):
    """RandomProvider with rows normalized to unit length."""

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        matrix = super().embed(texts)
        return matrix / np.linalg.norm(matrix, axis=1, keepdims=True)


class ScaledProvider:
    """Wrap another provider and scale every vector by a constant."""

    def __init__(self, inner, factor: float):
        self.inner = inner
        self.factor = factor
        self.dim = inner.dim

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        return self.inner.embed(texts) * self.factor


class EchoGenerator:
    """Generation stub: definition is a pure function of the prompt."""

    def __init__(self, fn=None):
        self.fn = fn or (lambda prompt: f"sense described by: {prompt}")

    def definitions_for(self, usages, tpl):
        from wuglabels.defgen import build_prompt

        return [self.fn(build_prompt(tpl, u)) for u in usages]


@pytest.fixture
def fixed_provider():
    return FixedProvider


@pytest.fixture
def random_provider():
    return RandomProvider
