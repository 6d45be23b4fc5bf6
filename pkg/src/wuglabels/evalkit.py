"""The blinded 'guess the cluster by definition' evaluation.

Items pair each labeled cluster with a filler cluster of the same lemma,
show up to five sampled example usages per cluster in a seeded presentation
order, and hide which system produced the definition. Filler pairings,
example samples and presentation order depend only on
(seed, dataset, lemma, true cluster), so every labeling method is evaluated
on identical trials.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from wuglabels.errors import DuplicateRecord, EmptySet, UnknownItem
from wuglabels.labels import ClusterLabel
from wuglabels.metrics import EvalScores, eval_scores
from wuglabels.wug import WordUsageGraph, eligible_clusters

GUIDELINE = (
    "The label fits a cluster if it fits the majority of the examples in it. "
    "Fluency or factual correctness do not matter: pick the cluster the label "
    "distinguishes best, or 'fits both' / 'fits none'."
)

CHOICES = ("first", "second", "both", "none")


@dataclass(frozen=True)
class EvalItem:
    item_id: str
    dataset_id: str
    lemma: str
    definition_text: str
    definition_language: str
    true_cluster_id: int
    filler_cluster_id: int
    examples_true: tuple[str, ...]
    examples_filler: tuple[str, ...]
    presentation_order: tuple[str, str]  # permutation of ("true", "filler")
    method_hidden: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "item_id": self.item_id,
            "dataset_id": self.dataset_id,
            "lemma": self.lemma,
            "definition_text": self.definition_text,
            "definition_language": self.definition_language,
            "true_cluster_id": self.true_cluster_id,
            "filler_cluster_id": self.filler_cluster_id,
            "examples_true": list(self.examples_true),
            "examples_filler": list(self.examples_filler),
            "presentation_order": list(self.presentation_order),
            "method_hidden": self.method_hidden,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> EvalItem:
        return cls(
            item_id=d["item_id"],
            dataset_id=d["dataset_id"],
            lemma=d["lemma"],
            definition_text=d["definition_text"],
            definition_language=d["definition_language"],
            true_cluster_id=int(d["true_cluster_id"]),
            filler_cluster_id=int(d["filler_cluster_id"]),
            examples_true=tuple(d["examples_true"]),
            examples_filler=tuple(d["examples_filler"]),
            presentation_order=tuple(d["presentation_order"]),
            method_hidden=d["method_hidden"],
        )


@dataclass(frozen=True)
class AnnotationRecord:
    item_id: str
    annotator_id: str
    choice: str
    note: str = ""
    timestamp: float = 0.0

    def __post_init__(self):
        if self.choice not in CHOICES:
            raise ValueError(f"choice must be one of {CHOICES}, got {self.choice!r}")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "item_id": self.item_id,
            "annotator_id": self.annotator_id,
            "choice": self.choice,
            "timestamp": self.timestamp,
        }
        if self.note:
            d["note"] = self.note
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> AnnotationRecord:
        return cls(
            item_id=d["item_id"],
            annotator_id=d["annotator_id"],
            choice=d["choice"],
            note=d.get("note", ""),
            timestamp=float(d.get("timestamp", 0.0)),
        )


@dataclass
class ItemBuildResult:
    items: list[EvalItem] = field(default_factory=list)
    skipped: list[dict[str, Any]] = field(default_factory=list)


def _derived_rng(seed: int, *parts: Any) -> random.Random:
    key = ":".join(str(p) for p in parts)
    digest = hashlib.sha256(f"{seed}|{key}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _item_id(dataset_id: str, lemma: str, cluster_id: int, method: str) -> str:
    # opaque on purpose: the raw key would leak the method to annotators
    key = f"{dataset_id}|{lemma}|{cluster_id}|{method}"
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


def build_items(
    graphs: Sequence[WordUsageGraph],
    labels: Sequence[ClusterLabel],
    seed: int,
    dataset_id: str = "default",
    examples_per_cluster: int = 5,
    min_size: int = 3,
) -> ItemBuildResult:
    """Construct one blinded trial per label; same seed => identical items.

    Labels whose lemma has no second eligible cluster are skipped and listed
    in the result. The filler draw, example samples and presentation order
    are all derived from (seed, dataset, lemma, true cluster) only, so the
    same trial is shared by every labeling method.
    """
    by_lemma = {g.lemma: g for g in graphs}
    result = ItemBuildResult()
    for label in labels:
        graph = by_lemma.get(label.lemma)
        if graph is None:
            result.skipped.append(
                {"lemma": label.lemma, "cluster_id": label.cluster_id,
                 "reason": "no graph for lemma"}
            )
            continue
        eligible = eligible_clusters(graph, min_size)
        others = [c for c in eligible if c.cluster_id != label.cluster_id]
        if not any(c.cluster_id == label.cluster_id for c in eligible):
            result.skipped.append(
                {"lemma": label.lemma, "cluster_id": label.cluster_id,
                 "reason": "labeled cluster not eligible"}
            )
            continue
        if not others:
            result.skipped.append(
                {"lemma": label.lemma, "cluster_id": label.cluster_id,
                 "reason": "no other eligible cluster to act as filler"}
            )
            continue

        pair_key = (dataset_id, label.lemma, label.cluster_id)
        filler = _derived_rng(seed, "filler", *pair_key).choice(
            sorted(others, key=lambda c: c.cluster_id)
        )
        true_cluster = graph.cluster_by_id(label.cluster_id)

        sampler = _derived_rng(seed, "examples", *pair_key, filler.cluster_id)
        examples_true = sampler.sample(
            sorted(true_cluster.member_ids),
            min(examples_per_cluster, true_cluster.size),
        )
        examples_filler = sampler.sample(
            sorted(filler.member_ids),
            min(examples_per_cluster, filler.size),
        )
        order_rng = _derived_rng(seed, "order", *pair_key, filler.cluster_id)
        order = ("true", "filler") if order_rng.random() < 0.5 else ("filler", "true")

        result.items.append(
            EvalItem(
                item_id=_item_id(dataset_id, label.lemma, label.cluster_id,
                                 label.method),
                dataset_id=dataset_id,
                lemma=label.lemma,
                definition_text=label.definition_text,
                definition_language=label.definition_language,
                true_cluster_id=label.cluster_id,
                filler_cluster_id=filler.cluster_id,
                examples_true=tuple(examples_true),
                examples_filler=tuple(examples_filler),
                presentation_order=order,
                method_hidden=label.method,
            )
        )
    return result


# --- annotator-facing payload (blinded) ---

def _example_payload(graph: WordUsageGraph, usage_id: str) -> dict[str, Any]:
    usage = graph.usages[usage_id]
    return {
        "tokens": list(usage.context_tokens),
        "target_index": usage.target_index,
    }


def blinded_payload(
    item: EvalItem, graphs_by_lemma: Mapping[str, WordUsageGraph]
) -> dict[str, Any]:
    """What an annotator is allowed to see: definition + two anonymous panels.

    Contains no method name and no cluster ids, only presentation slots.
    """
    graph = graphs_by_lemma[item.lemma]
    slot_examples = {
        "true": [_example_payload(graph, uid) for uid in item.examples_true],
        "filler": [_example_payload(graph, uid) for uid in item.examples_filler],
    }
    return {
        "item_id": item.item_id,
        "definition": item.definition_text,
        "guideline": GUIDELINE,
        "panels": [
            {"slot": "first", "examples": slot_examples[item.presentation_order[0]]},
            {"slot": "second", "examples": slot_examples[item.presentation_order[1]]},
        ],
    }


# --- aggregation and scoring ---

def outcome_of_choice(item: EvalItem, choice: str) -> str:
    """Map a presentation-slot choice to an outcome on the true cluster."""
    if choice in ("both", "none"):
        return choice
    slot = 0 if choice == "first" else 1
    return "correct" if item.presentation_order[slot] == "true" else "wrong"


def aggregate(
    records: Iterable[AnnotationRecord], items: Sequence[EvalItem]
) -> dict[str, str]:
    """Majority-vote outcome per item; three-way splits become 'unresolved'."""
    by_id = {item.item_id: item for item in items}
    votes: dict[str, list[str]] = {}
    seen: set[tuple[str, str]] = set()
    for rec in records:
        if rec.item_id not in by_id:
            raise UnknownItem(f"record references unknown item {rec.item_id!r}")
        key = (rec.item_id, rec.annotator_id)
        if key in seen:
            raise DuplicateRecord(
                f"annotator {rec.annotator_id!r} already answered item "
                f"{rec.item_id!r}"
            )
        seen.add(key)
        votes.setdefault(rec.item_id, []).append(
            outcome_of_choice(by_id[rec.item_id], rec.choice)
        )
    outcomes: dict[str, str] = {}
    for item_id, outcome_votes in sorted(votes.items()):
        counts: dict[str, int] = {}
        for v in outcome_votes:
            counts[v] = counts.get(v, 0) + 1
        top = max(counts.values())
        winners = [o for o, c in counts.items() if c == top]
        if len(winners) == 1 and top * 2 > len(outcome_votes):
            outcomes[item_id] = winners[0]
        else:
            outcomes[item_id] = "unresolved"
    return outcomes


@dataclass(frozen=True)
class ScoreRow:
    dataset_id: str
    definition_language: str
    method: str
    scores: EvalScores


def score(
    outcomes: Mapping[str, str], items: Sequence[EvalItem]
) -> list[ScoreRow]:
    """Score report grouped by (dataset, definition language, system)."""
    if not outcomes:
        raise EmptySet("no outcomes to score")
    by_id = {item.item_id: item for item in items}
    groups: dict[tuple[str, str, str], list[str]] = {}
    for item_id, outcome in outcomes.items():
        if item_id not in by_id:
            raise UnknownItem(f"outcome references unknown item {item_id!r}")
        item = by_id[item_id]
        key = (item.dataset_id, item.definition_language, item.method_hidden)
        groups.setdefault(key, []).append(outcome)
    return [
        ScoreRow(
            dataset_id=dataset_id,
            definition_language=language,
            method=method,
            scores=eval_scores(group),
        )
        for (dataset_id, language, method), group in sorted(groups.items())
    ]


def score_report_rows(rows: Sequence[ScoreRow]) -> list[dict[str, Any]]:
    """Flat Table-4-shaped rows with two-decimal percentages."""
    return [
        {
            "dataset": r.dataset_id,
            "definition_language": r.definition_language,
            "system": r.method,
            "items": r.scores.total,
            "accuracy": round(r.scores.accuracy, 2),
            "fits_both_pct": round(r.scores.fits_both_pct, 2),
            "fits_none_pct": round(r.scores.fits_none_pct, 2),
            "wrong_pct": round(r.scores.wrong_pct, 2),
            "unresolved_pct": round(r.scores.unresolved_pct, 2),
        }
        for r in rows
    ]


# --- persistence ---

def save_items(items: Iterable[EvalItem], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for item in items:
            fh.write(json.dumps(item.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def load_items(path: str | Path) -> list[EvalItem]:
    items = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                items.append(EvalItem.from_dict(json.loads(line)))
    return items


def append_record(record: AnnotationRecord, path: str | Path) -> None:
    """Append one record to the JSONL log (the only mutation in the system)."""
    with Path(path).open("a", encoding="utf-8") as fh:
        fh.write(json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True))
        fh.write("\n")
        fh.flush()


def load_records(path: str | Path) -> list[AnnotationRecord]:
    path = Path(path)
    if not path.exists():
        return []
    records = []
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(AnnotationRecord.from_dict(json.loads(line)))
    return records


# --- enriched-WUG export ---

def export_enriched(
    graphs: Sequence[WordUsageGraph],
    labels: Sequence[ClusterLabel],
    out_dir: str | Path,
) -> list[Path]:
    """One JSONL per graph mapping cluster_id -> definition, stably ordered."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_lemma: dict[str, list[ClusterLabel]] = {}
    for label in labels:
        by_lemma.setdefault(label.lemma, []).append(label)
    written = []
    for graph in graphs:
        if graph.lemma not in by_lemma:
            continue
        path = out_dir / f"{graph.lemma}.jsonl"
        rows = sorted(
            by_lemma[graph.lemma], key=lambda l: (l.cluster_id, l.method)
        )
        with path.open("w", encoding="utf-8") as fh:
            for label in rows:
                fh.write(
                    json.dumps(label.to_dict(), ensure_ascii=False, sort_keys=True)
                )
                fh.write("\n")
        written.append(path)
    return written


def load_enriched(path: str | Path) -> list[ClusterLabel]:
    return [
        ClusterLabel.from_dict(json.loads(line))
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
