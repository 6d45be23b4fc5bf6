"""Word Usage Graphs: loading, validation, eligibility and statistics.

A graph bundles one target word's usages, pairwise proximity judgments and a
clustering. Graphs are immutable after load and safe for concurrent reads.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from wuglabels.errors import (
    DanglingReference,
    DuplicateUsageId,
    InvalidGraph,
    MissingColumn,
)

NOISE_CLUSTER_ID = -1
JUDGMENT_SCALE = (1, 2, 3, 4)


@dataclass(frozen=True)
class Usage:
    """One occurrence of the target word in a pre-tokenized context."""

    usage_id: str
    lemma: str
    context_tokens: tuple[str, ...]
    target_index: int
    grouping: str = ""
    language: str = ""
    pos: str | None = None

    def __post_init__(self):
        if not self.context_tokens:
            raise InvalidGraph(f"usage {self.usage_id!r}: empty context")
        if not 0 <= self.target_index < len(self.context_tokens):
            raise InvalidGraph(
                f"usage {self.usage_id!r}: target_index {self.target_index} "
                f"outside context of {len(self.context_tokens)} tokens"
            )

    @property
    def target_token(self) -> str:
        return self.context_tokens[self.target_index]

    @property
    def context_text(self) -> str:
        return " ".join(self.context_tokens)


@dataclass(frozen=True)
class PairJudgment:
    """A graded semantic-proximity judgment on a pair of usages (1..4).

    Score 1 means the two usages carry entirely different senses.
    """

    usage_a: str
    usage_b: str
    annotator: str
    score: float

    def __post_init__(self):
        if self.usage_a == self.usage_b:
            raise InvalidGraph(f"self-judgment on usage {self.usage_a!r}")
        if self.score not in JUDGMENT_SCALE:
            raise InvalidGraph(
                f"judgment score {self.score!r} outside scale {JUDGMENT_SCALE}"
            )
        object.__setattr__(self, "score", float(self.score))  # stable JSON form


@dataclass(frozen=True)
class Cluster:
    cluster_id: int
    member_ids: frozenset[str]

    @property
    def size(self) -> int:
        return len(self.member_ids)


@dataclass(frozen=True)
class WordUsageGraph:
    lemma: str
    language: str
    usages: dict[str, Usage]
    judgments: tuple[PairJudgment, ...] = ()
    clusters: tuple[Cluster, ...] = ()
    diachronic: bool = False
    collection: str = ""

    def __post_init__(self):
        known = set(self.usages)
        for j in self.judgments:
            for end in (j.usage_a, j.usage_b):
                if end not in known:
                    raise DanglingReference(
                        f"graph {self.lemma!r}: judgment references unknown usage {end!r}"
                    )
        seen: set[str] = set()
        for c in self.clusters:
            for m in c.member_ids:
                if m not in known:
                    raise DanglingReference(
                        f"graph {self.lemma!r}: cluster {c.cluster_id} references "
                        f"unknown usage {m!r}"
                    )
                if m in seen:
                    raise InvalidGraph(
                        f"graph {self.lemma!r}: usage {m!r} appears in two clusters"
                    )
                seen.add(m)

    def cluster_by_id(self, cluster_id: int) -> Cluster:
        for c in self.clusters:
            if c.cluster_id == cluster_id:
                return c
        raise KeyError(cluster_id)


@dataclass(frozen=True)
class StatsRow:
    """One Table-1-style row: counts for a language/collection group."""

    collection: str
    language: str
    targets: int
    clusters: int
    eligible: int
    diachronic: bool


@dataclass
class LoadReport:
    graphs: list[WordUsageGraph] = field(default_factory=list)
    failures: list[tuple[str, Exception]] = field(default_factory=list)


# --- construction from plain dicts (normalized JSONL schema) ---

def usage_from_dict(d: dict[str, Any]) -> Usage:
    return Usage(
        usage_id=str(d["usage_id"]),
        lemma=d["lemma"],
        context_tokens=tuple(d["context_tokens"]),
        target_index=int(d["target_index"]),
        grouping=str(d.get("grouping", "")),
        language=d.get("language", ""),
        pos=d.get("pos"),
    )


def graph_from_dict(d: dict[str, Any]) -> WordUsageGraph:
    usages: dict[str, Usage] = {}
    for u in d["usages"]:
        usage = usage_from_dict(u)
        if usage.usage_id in usages:
            raise DuplicateUsageId(
                f"graph {d.get('lemma')!r}: duplicate usage_id {usage.usage_id!r}"
            )
        usages[usage.usage_id] = usage
    judgments = tuple(
        PairJudgment(
            usage_a=str(j["usage_a"]),
            usage_b=str(j["usage_b"]),
            annotator=str(j.get("annotator", "")),
            score=float(j["score"]),
        )
        for j in d.get("judgments", [])
    )
    clusters = tuple(
        Cluster(cluster_id=int(c["cluster_id"]), member_ids=frozenset(map(str, c["member_ids"])))
        for c in d.get("clusters", [])
    )
    return WordUsageGraph(
        lemma=d["lemma"],
        language=d["language"],
        usages=usages,
        judgments=judgments,
        clusters=clusters,
        diachronic=bool(d.get("diachronic", False)),
        collection=d.get("collection", ""),
    )


def graph_to_dict(g: WordUsageGraph) -> dict[str, Any]:
    out: dict[str, Any] = {
        "lemma": g.lemma,
        "language": g.language,
        "diachronic": g.diachronic,
        "usages": [
            {
                "usage_id": u.usage_id,
                "lemma": u.lemma,
                "pos": u.pos,
                "context_tokens": list(u.context_tokens),
                "target_index": u.target_index,
                "grouping": u.grouping,
                "language": u.language,
            }
            for u in sorted(g.usages.values(), key=lambda u: u.usage_id)
        ],
        "judgments": [
            {
                "usage_a": j.usage_a,
                "usage_b": j.usage_b,
                "annotator": j.annotator,
                "score": j.score,
            }
            for j in g.judgments
        ],
        "clusters": [
            {"cluster_id": c.cluster_id, "member_ids": sorted(c.member_ids)}
            for c in sorted(g.clusters, key=lambda c: c.cluster_id)
        ],
    }
    if g.collection:
        out["collection"] = g.collection
    return out


# --- normalized JSONL I/O ---

def _iter_jsonl_files(path: Path) -> Iterable[Path]:
    if path.is_dir():
        yield from sorted(path.glob("*.jsonl"))
    else:
        yield path


def save_graphs(graphs: Iterable[WordUsageGraph], path: str | Path) -> None:
    """Write graphs as normalized JSONL, one graph object per line."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for g in graphs:
            fh.write(json.dumps(graph_to_dict(g), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def _load_jsonl_graphs(path: Path) -> list[WordUsageGraph]:
    graphs = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InvalidGraph(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            for key in ("lemma", "language", "usages"):
                if key not in d:
                    raise MissingColumn(f"{path}:{lineno}: missing key {key!r}")
            graphs.append(graph_from_dict(d))
    return graphs


# --- DWUG-style TSV ingestion via a column-mapping config ---

def load_mapping(path: str | Path) -> dict[str, Any]:
    with Path(path).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _read_tsv(path: Path) -> list[dict[str, str]]:
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        return list(reader)


def _require(row: dict[str, str], column: str, path: Path) -> str:
    if column not in row:
        raise MissingColumn(f"{path}: missing column {column!r}")
    return row[column]


def _char_span_to_token_index(tokens: list[str], span: str, usage_id: str) -> int:
    # span is "start:end" character offsets into the space-joined context
    try:
        start = int(span.split(":")[0])
    except (ValueError, IndexError) as exc:
        raise InvalidGraph(f"usage {usage_id!r}: bad character span {span!r}") from exc
    offset = 0
    for i, tok in enumerate(tokens):
        if offset <= start < offset + len(tok):
            return i
        offset += len(tok) + 1  # single-space joints
    raise InvalidGraph(f"usage {usage_id!r}: span {span!r} outside context")


def _load_tsv_graph(graph_dir: Path, mapping: dict[str, Any]) -> WordUsageGraph:
    cols = mapping["columns"]
    uses_path = graph_dir / mapping.get("uses_file", "uses.tsv")
    rows = _read_tsv(uses_path)

    usages: dict[str, Usage] = {}
    lemma = mapping.get("lemma", graph_dir.name)
    for row in rows:
        usage_id = _require(row, cols["usage_id"], uses_path)
        context = _require(row, cols["context"], uses_path)
        tokens = context.split(mapping.get("context_delimiter", " "))
        raw_target = _require(row, cols["target"], uses_path)
        if mapping.get("target_position", "token_index") == "char_span":
            target_index = _char_span_to_token_index(tokens, raw_target, usage_id)
        else:
            target_index = int(raw_target)
        if "lemma" in cols and cols["lemma"] in row:
            lemma = row[cols["lemma"]]
        if usage_id in usages:
            raise DuplicateUsageId(f"{uses_path}: duplicate usage_id {usage_id!r}")
        usages[usage_id] = Usage(
            usage_id=usage_id,
            lemma=lemma,
            context_tokens=tuple(tokens),
            target_index=target_index,
            grouping=row.get(cols.get("grouping", ""), ""),
            language=mapping.get("language", ""),
            pos=row.get(cols.get("pos", ""), None) or None,
        )

    clusters: tuple[Cluster, ...] = ()
    clusters_file = graph_dir / mapping.get("clusters_file", "clusters.tsv")
    if clusters_file.exists():
        ccols = mapping.get(
            "cluster_columns", {"usage_id": "identifier", "cluster_id": "cluster"}
        )
        members: dict[int, set[str]] = {}
        for row in _read_tsv(clusters_file):
            uid = _require(row, ccols["usage_id"], clusters_file)
            cid = int(_require(row, ccols["cluster_id"], clusters_file))
            members.setdefault(cid, set()).add(uid)
        clusters = tuple(
            Cluster(cluster_id=cid, member_ids=frozenset(ids))
            for cid, ids in sorted(members.items())
        )

    judgments: tuple[PairJudgment, ...] = ()
    judgments_file = graph_dir / mapping.get("judgments_file", "judgments.tsv")
    if judgments_file.exists():
        jcols = mapping.get(
            "judgment_columns",
            {
                "usage_a": "identifier1",
                "usage_b": "identifier2",
                "annotator": "annotator",
                "score": "judgment",
            },
        )
        judgments = tuple(
            PairJudgment(
                usage_a=_require(row, jcols["usage_a"], judgments_file),
                usage_b=_require(row, jcols["usage_b"], judgments_file),
                annotator=row.get(jcols.get("annotator", ""), ""),
                score=float(_require(row, jcols["score"], judgments_file)),
            )
            for row in _read_tsv(judgments_file)
        )

    return WordUsageGraph(
        lemma=lemma,
        language=mapping.get("language", ""),
        usages=usages,
        judgments=judgments,
        clusters=clusters,
        diachronic=bool(mapping.get("diachronic", False)),
        collection=mapping.get("collection", ""),
    )


def load_graphs(
    path: str | Path,
    format: str = "normalized-jsonl",
    mapping: dict[str, Any] | None = None,
) -> list[WordUsageGraph]:
    """Load and validate graphs; raises on the first invalid file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if format == "normalized-jsonl":
        graphs: list[WordUsageGraph] = []
        for file in _iter_jsonl_files(path):
            graphs.extend(_load_jsonl_graphs(file))
        return graphs
    if format == "tsv+mapping":
        if mapping is None:
            raise MissingColumn("tsv ingestion requires a column-mapping config")
        uses_name = mapping.get("uses_file", "uses.tsv")
        if (path / uses_name).exists():
            return [_load_tsv_graph(path, mapping)]
        dirs = sorted(d for d in path.iterdir() if (d / uses_name).exists())
        if not dirs:
            raise MissingColumn(f"{path}: no {uses_name!r} found in any subdirectory")
        return [_load_tsv_graph(d, mapping) for d in dirs]
    raise ValueError(f"unknown format {format!r}")


def scan_graphs(
    path: str | Path,
    format: str = "normalized-jsonl",
    mapping: dict[str, Any] | None = None,
) -> LoadReport:
    """Like load_graphs, but collects validation failures per file."""
    path = Path(path)
    report = LoadReport()
    if format == "normalized-jsonl":
        sources = list(_iter_jsonl_files(path))
    else:
        uses_name = (mapping or {}).get("uses_file", "uses.tsv")
        if (path / uses_name).exists():
            sources = [path]
        else:
            sources = sorted(d for d in path.iterdir() if d.is_dir())
    for source in sources:
        try:
            report.graphs.extend(load_graphs(source, format=format, mapping=mapping))
        except Exception as exc:  # noqa: BLE001 - failures are the payload here
            report.failures.append((str(source), exc))
    return report


# --- eligibility and statistics ---

def eligible_clusters(graph: WordUsageGraph, min_size: int = 3) -> list[Cluster]:
    """Clusters worth labeling: id != -1 and at least `min_size` usages."""
    return sorted(
        (
            c
            for c in graph.clusters
            if c.cluster_id != NOISE_CLUSTER_ID and c.size >= min_size
        ),
        key=lambda c: c.cluster_id,
    )


def graph_stats(
    graphs: Iterable[WordUsageGraph], min_size: int = 3
) -> list[StatsRow]:
    """Table-1-style counts, grouped by collection (falling back to language)."""
    groups: dict[tuple[str, str, bool], list[WordUsageGraph]] = {}
    for g in graphs:
        key = (g.collection or g.language, g.language, g.diachronic)
        groups.setdefault(key, []).append(g)
    if not groups:
        return [StatsRow("", "", 0, 0, 0, False)]
    rows = []
    for (collection, language, diachronic), members in sorted(groups.items()):
        rows.append(
            StatsRow(
                collection=collection,
                language=language,
                targets=len(members),
                clusters=sum(len(g.clusters) for g in members),
                eligible=sum(len(eligible_clusters(g, min_size)) for g in members),
                diachronic=diachronic,
            )
        )
    return rows
