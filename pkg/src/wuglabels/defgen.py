"""Definition generation and prototypical-definition aggregation.

Per-usage definitions come from an external generator (HTTP client) or a
pre-generated JSONL file; the cluster is then labeled with the generated
definition whose embedding lies closest (by cosine) to the centroid of the
cluster's definition embeddings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Protocol, Sequence

import requests

from wuglabels.embeddings import EmbeddingProvider, cosine, embed_batch
from wuglabels.errors import (
    EmptyGeneration,
    GeneratorUnavailable,
    InvalidTemplate,
    MissingPregenerated,
    ZeroVector,
)
from wuglabels.labels import ClusterLabel
from wuglabels.wug import Cluster, Usage, WordUsageGraph

# Usage text goes first, then the question, joined by a single space.
NATIVE_PROMPTS = {
    "en": "{usage} What is the definition of {target}?",
    "no": "{usage} Hva betyr {target}?",
    "ru": "{usage} Что такое {target}?",
    "de": "{usage} Was ist die Definition von {target}?",
}


@dataclass(frozen=True)
class PromptTemplate:
    language: str
    template: str

    def __post_init__(self):
        for placeholder in ("{usage}", "{target}"):
            if self.template.count(placeholder) != 1:
                raise InvalidTemplate(
                    f"template must contain {placeholder} exactly once: "
                    f"{self.template!r}"
                )

    @classmethod
    def native(cls, language: str) -> PromptTemplate:
        if language not in NATIVE_PROMPTS:
            raise InvalidTemplate(f"no native prompt for language {language!r}")
        return cls(language=language, template=NATIVE_PROMPTS[language])


@dataclass(frozen=True)
class GeneratedDefinition:
    usage_id: str
    definition_text: str
    definition_language: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "usage_id": self.usage_id,
            "definition": self.definition_text,
            "language": self.definition_language,
        }


def build_prompt(tpl: PromptTemplate, usage: Usage) -> str:
    """Substitute the space-joined context and the target surface form."""
    return tpl.template.replace("{usage}", usage.context_text).replace(
        "{target}", usage.target_token
    )


class DefinitionSource(Protocol):
    def definitions_for(
        self, usages: Sequence[Usage], tpl: PromptTemplate
    ) -> list[str]: ...


class RemoteGenerator:
    """Client for the POST /generate JSON protocol.

    Request {"prompts": [...], "params": {...}}; response
    {"definitions": [...]} aligned with the prompts. Decoding parameters are
    passed through untouched; policy lives server-side.
    """

    def __init__(self, url: str, params: dict[str, Any] | None = None,
                 retries: int = 2, timeout: float = 120.0):
        self.url = url.rstrip("/")
        self.params = params or {}
        self.retries = retries
        self.timeout = timeout

    def definitions_for(
        self, usages: Sequence[Usage], tpl: PromptTemplate
    ) -> list[str]:
        prompts = [build_prompt(tpl, u) for u in usages]
        last: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                resp = requests.post(
                    f"{self.url}/generate",
                    json={"prompts": prompts, "params": self.params},
                    timeout=self.timeout,
                )
                resp.raise_for_status()
                definitions = resp.json()["definitions"]
                if len(definitions) != len(prompts):
                    raise GeneratorUnavailable(
                        f"generator returned {len(definitions)} definitions "
                        f"for {len(prompts)} prompts"
                    )
                return [str(d) for d in definitions]
            except (requests.RequestException, KeyError, ValueError) as exc:
                last = exc
        raise GeneratorUnavailable(f"generation service at {self.url}: {last}")


class FileDefinitionSource:
    """Pre-generated definitions: JSONL rows {usage_id, definition, language}."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._by_usage: dict[str, str] = {}
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                d = json.loads(line)
                self._by_usage[str(d["usage_id"])] = str(d["definition"])

    def definitions_for(
        self, usages: Sequence[Usage], tpl: PromptTemplate
    ) -> list[str]:
        missing = [u.usage_id for u in usages if u.usage_id not in self._by_usage]
        if missing:
            raise MissingPregenerated(
                f"{self.path}: no pre-generated definition for usage(s) "
                + ", ".join(repr(m) for m in missing)
            )
        return [self._by_usage[u.usage_id] for u in usages]


_WHITESPACE_RUN = re.compile(r"\s+")


def normalize_definition(text: str) -> str:
    """Trim and collapse internal whitespace runs (a known generation artifact)."""
    return _WHITESPACE_RUN.sub(" ", text).strip()


def generate_for_cluster(
    graph: WordUsageGraph,
    cluster: Cluster,
    tpl: PromptTemplate,
    source: DefinitionSource,
) -> list[GeneratedDefinition]:
    """Exactly one definition per member usage, in ascending usage_id order.

    Empty generations are reported as failures rather than dropped.
    """
    usages = [graph.usages[uid] for uid in sorted(cluster.member_ids)]
    raw = source.definitions_for(usages, tpl)
    empty = [u.usage_id for u, text in zip(usages, raw) if not text.strip()]
    if empty:
        raise EmptyGeneration(
            "generator produced empty definitions for usage(s) "
            + ", ".join(repr(e) for e in empty)
        )
    return [
        GeneratedDefinition(
            usage_id=u.usage_id,
            definition_text=text.strip(),
            definition_language=tpl.language,
        )
        for u, text in zip(usages, raw)
    ]


def select_prototypical(
    defs: Sequence[GeneratedDefinition], provider: EmbeddingProvider
) -> GeneratedDefinition:
    """The definition whose embedding is closest by cosine to the centroid.

    Duplicate texts are embedded once but weigh the centroid per occurrence.
    Ties break by ascending usage_id.
    """
    if not defs:
        raise EmptyGeneration("no definitions to select from")
    ordered = sorted(defs, key=lambda d: d.usage_id)
    texts = [normalize_definition(d.definition_text) for d in ordered]
    unique = sorted(set(texts))
    matrix = embed_batch(provider, unique)
    row_of = {text: i for i, text in enumerate(unique)}
    vectors = [matrix[row_of[t]] for t in texts]
    center = sum(vectors) / len(vectors)
    if not float((center * center).sum()) > 0.0:
        raise ZeroVector("definition embeddings average to a zero centroid")
    best: GeneratedDefinition | None = None
    best_cos = -2.0
    for d, v in zip(ordered, vectors):
        try:
            c = cosine(v, center)
        except ZeroVector:
            raise ZeroVector(
                f"definition for usage {d.usage_id!r} embeds to a zero vector"
            ) from None
        if c > best_cos:
            best, best_cos = d, c
    assert best is not None
    return best


def defgen_label(
    graph: WordUsageGraph,
    cluster: Cluster,
    tpl: PromptTemplate,
    source: DefinitionSource,
    provider: EmbeddingProvider,
) -> ClusterLabel:
    """Generate per-usage definitions, then label with the prototypical one."""
    defs = generate_for_cluster(graph, cluster, tpl, source)
    chosen = select_prototypical(defs, provider)
    return ClusterLabel(
        lemma=graph.lemma,
        cluster_id=cluster.cluster_id,
        definition_text=normalize_definition(chosen.definition_text),
        definition_language=tpl.language,
        method="defgen",
        per_usage=tuple(d.to_dict() for d in defs),
    )
