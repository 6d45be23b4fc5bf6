"""Cluster labels: one definition per eligible cluster, with provenance."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

METHODS = ("lesk", "retrieval", "defgen")


@dataclass(frozen=True)
class ClusterLabel:
    lemma: str
    cluster_id: int
    definition_text: str
    definition_language: str
    method: str
    sense_id: str | None = None
    per_usage: tuple[dict[str, Any], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown labeling method {self.method!r}")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "lemma": self.lemma,
            "cluster_id": self.cluster_id,
            "definition": self.definition_text,
            "language": self.definition_language,
            "method": self.method,
        }
        if self.sense_id is not None:
            d["sense_id"] = self.sense_id
        if self.per_usage is not None:
            d["per_usage"] = list(self.per_usage)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ClusterLabel:
        per_usage = d.get("per_usage")
        return cls(
            lemma=d["lemma"],
            cluster_id=int(d["cluster_id"]),
            definition_text=d["definition"],
            definition_language=d.get("language", ""),
            method=d["method"],
            sense_id=d.get("sense_id"),
            per_usage=tuple(per_usage) if per_usage is not None else None,
        )


def save_labels(labels: Iterable[ClusterLabel], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for label in labels:
            fh.write(json.dumps(label.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def load_labels(path: str | Path) -> list[ClusterLabel]:
    labels = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                labels.append(ClusterLabel.from_dict(json.loads(line)))
    return labels
