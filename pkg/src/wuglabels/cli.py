"""Command-line pipeline around the library.

Subcommands mirror the pipeline stages: ingest raw WUG releases, label
clusters, tune retrieval depth, build the blinded evaluation, serve the
annotation UI backend, and score/report.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from wuglabels import datasets as datasets_mod
from wuglabels import evalkit, lesk, retrieval, wug
from wuglabels.defgen import (
    FileDefinitionSource,
    PromptTemplate,
    RemoteGenerator,
    defgen_label,
)
from wuglabels.embeddings import HashingEmbedder, RemoteEmbedder
from wuglabels.errors import WuglabelsError
from wuglabels.labels import ClusterLabel, save_labels
from wuglabels.lexicon import load_lexicon
from wuglabels.metrics import rouge_l
from wuglabels.service import ServiceConfig, serve


@click.group()
def main() -> None:
    """Label Word Usage Graph clusters with definitions and evaluate them."""


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _embedder(embedder_url: str | None) -> HashingEmbedder | RemoteEmbedder:
    if embedder_url:
        return RemoteEmbedder(embedder_url)
    return HashingEmbedder()


def _load_data(data: str) -> list[wug.WordUsageGraph]:
    return wug.load_graphs(data)


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True),
              help="Input file or directory.")
@click.option("--format", "fmt", default="normalized-jsonl",
              type=click.Choice(["normalized-jsonl", "tsv+mapping"]))
@click.option("--mapping", type=click.Path(exists=True),
              help="Column-mapping config (JSON) for tsv+mapping input.")
@click.option("--out", required=True, type=click.Path(),
              help="Normalized JSONL output file.")
def ingest(data: str, fmt: str, mapping: str | None, out: str) -> None:
    """Validate raw WUG data and write it as normalized JSONL."""
    mapping_cfg = wug.load_mapping(mapping) if mapping else None
    report = wug.scan_graphs(data, format=fmt, mapping=mapping_cfg)
    wug.save_graphs(report.graphs, out)
    click.echo(f"ingested {len(report.graphs)} graph(s) -> {out}")
    for source, exc in report.failures:
        click.echo(f"failed: {source}: {exc}", err=True)
    if report.failures:
        sys.exit(1)


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True))
@click.option("--method", required=True,
              type=click.Choice(["lesk", "retrieval", "defgen"]))
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True),
              help="Sense inventory (TSV or JSONL); lesk and retrieval.")
@click.option("--labels", "labels_out", required=True, type=click.Path(),
              help="Output labels JSONL.")
@click.option("--k", default=1, show_default=True,
              help="Retrieval depth (retrieval method).")
@click.option("--prompt-lang", default="en", show_default=True)
@click.option("--generator-url", default=None,
              help="Definition generation service (defgen).")
@click.option("--definitions", "definitions_path", type=click.Path(exists=True),
              help="Pre-generated definitions JSONL (defgen).")
@click.option("--embedder-url", default=None,
              help="Embedding service; defaults to the local hashing embedder.")
@click.option("--min-size", default=3, show_default=True)
def label(data: str, method: str, lexicon_path: str | None, labels_out: str,
          k: int, prompt_lang: str, generator_url: str | None,
          definitions_path: str | None, embedder_url: str | None,
          min_size: int) -> None:
    """Label every eligible cluster with the chosen method."""
    try:
        graphs = _load_data(data)
        labels: list[ClusterLabel] = []
        if method == "lesk":
            if not lexicon_path:
                raise WuglabelsError("--lexicon is required for method=lesk")
            lex = load_lexicon(lexicon_path)
            for graph in graphs:
                for cluster in wug.eligible_clusters(graph, min_size):
                    labels.append(lesk.lesk_label(graph, cluster, lex))
        elif method == "retrieval":
            if not lexicon_path:
                raise WuglabelsError("--lexicon is required for method=retrieval")
            lex = load_lexicon(lexicon_path)
            provider = _embedder(embedder_url)
            index = retrieval.build_index(lex, provider)
            labels = retrieval.label_eligible_clusters(
                graphs, index, provider, k, lex, min_size
            )
        else:  # defgen
            if definitions_path:
                source: FileDefinitionSource | RemoteGenerator = (
                    FileDefinitionSource(definitions_path)
                )
            elif generator_url:
                source = RemoteGenerator(generator_url)
            else:
                raise WuglabelsError(
                    "method=defgen needs --definitions or --generator-url"
                )
            tpl = PromptTemplate.native(prompt_lang)
            provider = _embedder(embedder_url)
            for graph in graphs:
                for cluster in wug.eligible_clusters(graph, min_size):
                    labels.append(defgen_label(graph, cluster, tpl, source, provider))
        save_labels(labels, labels_out)
        click.echo(f"wrote {len(labels)} label(s) -> {labels_out}")
    except WuglabelsError as exc:
        _fail(exc)


@main.command(name="tune-k")
@click.option("--data", required=True, type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_path", required=True,
              type=click.Path(exists=True))
@click.option("--candidates", default="1,3,10", show_default=True)
@click.option("--embedder-url", default=None)
@click.option("--min-size", default=3, show_default=True)
def tune_k_cmd(data: str, lexicon_path: str, candidates: str,
               embedder_url: str | None, min_size: int) -> None:
    """Choose the retrieval depth k that least confuses judged-different pairs."""
    try:
        graphs = _load_data(data)
        lex = load_lexicon(lexicon_path)
        provider = _embedder(embedder_url)
        index = retrieval.build_index(lex, provider)
        ks = sorted(int(c) for c in candidates.split(","))
        for k in ks:
            p = retrieval.same_label_probability(
                graphs, index, provider, k, lex, min_size
            )
            click.echo(f"k={k}\tP(same definition | judged different)={p:.6f}")
        best = retrieval.tune_k(graphs, index, provider, ks, lex, min_size)
        click.echo(f"chosen k={best}")
    except WuglabelsError as exc:
        _fail(exc)


@main.command(name="build-eval")
@click.option("--data", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True,
              type=click.Path(exists=True))
@click.option("--items", "items_out", required=True, type=click.Path())
@click.option("--seed", required=True, type=int)
@click.option("--dataset-id", default="default", show_default=True)
def build_eval(data: str, labels_path: str, items_out: str, seed: int,
               dataset_id: str) -> None:
    """Build blinded evaluation items from labels (deterministic per seed)."""
    from wuglabels.labels import load_labels

    try:
        graphs = _load_data(data)
        labels = load_labels(labels_path)
        result = evalkit.build_items(graphs, labels, seed, dataset_id)
        evalkit.save_items(result.items, items_out)
        click.echo(f"wrote {len(result.items)} item(s) -> {items_out}")
        for skip in result.skipped:
            click.echo(
                f"skipped {skip['lemma']} cluster {skip['cluster_id']}: "
                f"{skip['reason']}",
                err=True,
            )
    except WuglabelsError as exc:
        _fail(exc)


@main.command(name="serve")
@click.option("--items", "items_path", required=True, type=click.Path(exists=True))
@click.option("--records", "records_path", required=True, type=click.Path())
@click.option("--data", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True)
def serve_cmd(items_path: str, records_path: str, data: str, host: str,
              port: int) -> None:
    """Serve the annotation API for the browser frontend."""
    config = ServiceConfig(
        items_path=Path(items_path),
        records_path=Path(records_path),
        data_path=Path(data),
    )
    try:
        serve(config, host=host, port=port)
    except WuglabelsError as exc:
        _fail(exc)


@main.command(name="score")
@click.option("--items", "items_path", required=True, type=click.Path(exists=True))
@click.option("--records", "records_path", required=True,
              type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(),
              help="Write the TSV report here instead of stdout.")
def score_cmd(items_path: str, records_path: str, out_path: str | None) -> None:
    """Aggregate records by majority vote and print a Table-4-shaped report."""
    try:
        items = evalkit.load_items(items_path)
        records = evalkit.load_records(records_path)
        outcomes = evalkit.aggregate(records, items)
        rows = evalkit.score_report_rows(evalkit.score(outcomes, items))
    except WuglabelsError as exc:
        _fail(exc)
        return
    header = ["dataset", "definition_language", "system", "items", "accuracy",
              "fits_both_pct", "fits_none_pct", "wrong_pct", "unresolved_pct"]
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(str(row[h]) for h in header))
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"wrote report -> {out_path}")
    else:
        click.echo(text, nl=False)


@main.command(name="stats")
@click.option("--data", required=True, type=click.Path(exists=True))
@click.option("--min-size", default=3, show_default=True)
@click.option("--definitions-dataset", "defs_path", type=click.Path(exists=True),
              help="Also report definition-dataset statistics for this JSONL.")
def stats_cmd(data: str, min_size: int, defs_path: str | None) -> None:
    """Eligibility statistics per collection (plus optional dataset stats)."""
    try:
        graphs = _load_data(data)
        rows = wug.graph_stats(graphs, min_size)
        click.echo("collection\tlanguage\ttargets\tclusters\teligible\tdiachronic")
        for r in rows:
            click.echo(
                f"{r.collection}\t{r.language}\t{r.targets}\t{r.clusters}"
                f"\t{r.eligible}\t{r.diachronic}"
            )
        if defs_path:
            data_rows = datasets_mod.load_definition_dataset(defs_path)
            s = datasets_mod.dataset_stats(data_rows)
            click.echo(
                json.dumps(
                    {
                        "entries": s.entries,
                        "lemmas": s.lemmas,
                        "ratio": round(s.ratio, 2),
                        "usage_len": f"{s.usage_len_mean:.2f}±{s.usage_len_sd:.2f}",
                        "definition_len":
                            f"{s.definition_len_mean:.2f}±{s.definition_len_sd:.2f}",
                        "token_counter": s.counter_name,
                    },
                    ensure_ascii=False,
                )
            )
    except WuglabelsError as exc:
        _fail(exc)


@main.command(name="rouge")
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True),
              help="Reference definitions, one per line.")
@click.option("--cand", "cand_path", required=True, type=click.Path(exists=True),
              help="Candidate definitions, one per line, aligned with --ref.")
def rouge_cmd(ref_path: str, cand_path: str) -> None:
    """Mean ROUGE-L (x100) between line-aligned reference/candidate files."""
    refs = Path(ref_path).read_text(encoding="utf-8").splitlines()
    cands = Path(cand_path).read_text(encoding="utf-8").splitlines()
    if len(refs) != len(cands):
        _fail(WuglabelsError(
            f"line counts differ: {len(refs)} references, {len(cands)} candidates"
        ))
    if not refs:
        _fail(WuglabelsError("empty input"))
    scores = [rouge_l(r, c) for r, c in zip(refs, cands)]
    n = len(scores)
    click.echo(
        f"rouge_l_f={100.0 * sum(s.f for s in scores) / n:.2f}\t"
        f"recall={100.0 * sum(s.recall for s in scores) / n:.2f}\t"
        f"precision={100.0 * sum(s.precision for s in scores) / n:.2f}\t"
        f"pairs={n}"
    )


if __name__ == "__main__":
    main()
