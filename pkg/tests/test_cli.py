from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from conftest import make_graph, make_usage
from wuglabels.cli import main
from wuglabels.evalkit import AnnotationRecord, append_record, load_items
from wuglabels.labels import load_labels
from wuglabels.lexicon import Lexicon, Sense
from wuglabels.lesk import lesk_label
from wuglabels.wug import eligible_clusters, load_graphs, save_graphs


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fixture_files(tmp_path):
    usages = []
    clusters = []
    for c in range(2):
        members = []
        for i in range(3):
            uid = f"c{c}u{i}"
            tokens = ["the", "bank", "near", "water"] if c == 0 else [
                "the", "bank", "holds", "money",
            ]
            usages.append(make_usage(uid, tokens + [f"x{i}"], target_index=1))
            members.append(uid)
        clusters.append((c, members))
    graph = make_graph(lemma="bank", usages=usages, clusters=clusters,
                       judgments=[("c0u0", "c1u0", "ann", 1)])
    data = tmp_path / "graphs.jsonl"
    save_graphs([graph], data)

    lexicon = tmp_path / "lexicon.tsv"
    lexicon.write_text(
        "sense_id\tlemma\tpos\tgloss\n"
        "bank.n.01\tbank\tn\tsloping land beside water\n"
        "bank.n.02\tbank\tn\tan institution that holds money\n",
        encoding="utf-8",
    )
    return tmp_path, data, lexicon, graph


def test_label_lesk_matches_library(runner, fixture_files):
    tmp_path, data, lexicon, graph = fixture_files
    out = tmp_path / "labels.jsonl"
    result = runner.invoke(main, [
        "label", "--data", str(data), "--method", "lesk",
        "--lexicon", str(lexicon), "--labels", str(out),
    ])
    assert result.exit_code == 0, result.output
    labels = load_labels(out)
    lex = Lexicon([
        Sense("bank.n.01", "bank", "sloping land beside water", pos="n"),
        Sense("bank.n.02", "bank", "an institution that holds money", pos="n"),
    ])
    expected = [
        lesk_label(graph, c, lex) for c in eligible_clusters(graph)
    ]
    assert [l.to_dict() for l in labels] == [l.to_dict() for l in expected]
    assert labels[0].sense_id == "bank.n.01"  # water cluster
    assert labels[1].sense_id == "bank.n.02"  # money cluster


def test_label_retrieval(runner, fixture_files):
    tmp_path, data, lexicon, _ = fixture_files
    out = tmp_path / "labels.jsonl"
    result = runner.invoke(main, [
        "label", "--data", str(data), "--method", "retrieval",
        "--lexicon", str(lexicon), "--labels", str(out), "--k", "1",
    ])
    assert result.exit_code == 0, result.output
    labels = load_labels(out)
    assert len(labels) == 2
    assert all(l.method == "retrieval" for l in labels)


def test_label_defgen_from_file(runner, fixture_files):
    tmp_path, data, lexicon, graph = fixture_files
    defs = tmp_path / "defs.jsonl"
    rows = [
        {"usage_id": uid, "definition": f"meaning for {uid[:2]}",
         "language": "en"}
        for uid in graph.usages
    ]
    defs.write_text("".join(json.dumps(r) + "\n" for r in rows),
                    encoding="utf-8")
    out = tmp_path / "labels.jsonl"
    result = runner.invoke(main, [
        "label", "--data", str(data), "--method", "defgen",
        "--definitions", str(defs), "--labels", str(out),
    ])
    assert result.exit_code == 0, result.output
    labels = load_labels(out)
    assert {l.definition_text for l in labels} == {
        "meaning for c0", "meaning for c1",
    }


def test_label_defgen_requires_source(runner, fixture_files):
    tmp_path, data, _, _ = fixture_files
    result = runner.invoke(main, [
        "label", "--data", str(data), "--method", "defgen",
        "--labels", str(tmp_path / "x.jsonl"),
    ])
    assert result.exit_code == 1
    assert "definitions" in result.output


def test_build_eval_deterministic(runner, fixture_files):
    tmp_path, data, lexicon, _ = fixture_files
    labels_path = tmp_path / "labels.jsonl"
    runner.invoke(main, [
        "label", "--data", str(data), "--method", "lesk",
        "--lexicon", str(lexicon), "--labels", str(labels_path),
    ])
    items_a = tmp_path / "items_a.jsonl"
    items_b = tmp_path / "items_b.jsonl"
    for out in (items_a, items_b):
        result = runner.invoke(main, [
            "build-eval", "--data", str(data), "--labels", str(labels_path),
            "--items", str(out), "--seed", "7",
        ])
        assert result.exit_code == 0, result.output
    assert items_a.read_bytes() == items_b.read_bytes()
    assert len(load_items(items_a)) == 2


def test_score_tsv_report(runner, fixture_files):
    tmp_path, data, lexicon, _ = fixture_files
    labels_path = tmp_path / "labels.jsonl"
    items_path = tmp_path / "items.jsonl"
    records_path = tmp_path / "records.jsonl"
    runner.invoke(main, [
        "label", "--data", str(data), "--method", "lesk",
        "--lexicon", str(lexicon), "--labels", str(labels_path),
    ])
    runner.invoke(main, [
        "build-eval", "--data", str(data), "--labels", str(labels_path),
        "--items", str(items_path), "--seed", "3", "--dataset-id", "dwug-en",
    ])
    for item in load_items(items_path):
        choice = "first" if item.presentation_order[0] == "true" else "second"
        append_record(AnnotationRecord(item.item_id, "ann1", choice),
                      records_path)
    result = runner.invoke(main, [
        "score", "--items", str(items_path), "--records", str(records_path),
    ])
    assert result.exit_code == 0, result.output
    lines = result.output.strip().splitlines()
    header = lines[0].split("\t")
    assert header[:5] == ["dataset", "definition_language", "system", "items",
                          "accuracy"]
    row = dict(zip(header, lines[1].split("\t")))
    assert row["dataset"] == "dwug-en"
    assert row["system"] == "lesk"
    assert row["accuracy"] == "100.0"


def test_stats_output(runner, fixture_files):
    _, data, _, _ = fixture_files
    result = runner.invoke(main, ["stats", "--data", str(data)])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0].startswith("collection\tlanguage")
    assert lines[1].split("\t")[2:5] == ["1", "2", "2"]  # targets/clusters/eligible


def test_ingest_roundtrip(runner, fixture_files, tmp_path):
    _, data, _, _ = fixture_files
    out = tmp_path / "normalized.jsonl"
    result = runner.invoke(main, [
        "ingest", "--data", str(data), "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert out.read_bytes() == data.read_bytes()


def test_ingest_tsv_with_mapping(runner, tmp_path):
    graph_dir = tmp_path / "raw" / "plane"
    graph_dir.mkdir(parents=True)
    (graph_dir / "uses.tsv").write_text(
        "identifier\tcontext_tokenized\tindexes_target_token_tokenized"
        "\tgrouping\tlemma\tpos\n"
        "u1\tthe plane flew\t1\t1\tplane\tNN\n"
        "u2\ta plane landed\t1\t2\tplane\tNN\n"
        "u3\tmy plane left\t1\t1\tplane\tNN\n",
        encoding="utf-8",
    )
    (graph_dir / "clusters.tsv").write_text(
        "identifier\tcluster\nu1\t0\nu2\t0\nu3\t0\n", encoding="utf-8"
    )
    mapping = tmp_path / "mapping.json"
    mapping.write_text(json.dumps({
        "columns": {
            "usage_id": "identifier",
            "context": "context_tokenized",
            "target": "indexes_target_token_tokenized",
            "grouping": "grouping",
            "lemma": "lemma",
            "pos": "pos",
        },
        "target_position": "token_index",
        "language": "en",
        "diachronic": True,
    }), encoding="utf-8")
    out = tmp_path / "normalized.jsonl"
    result = runner.invoke(main, [
        "ingest", "--data", str(tmp_path / "raw"), "--format", "tsv+mapping",
        "--mapping", str(mapping), "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    graphs = load_graphs(out)
    assert graphs[0].lemma == "plane"
    assert len(graphs[0].usages) == 3


def test_tune_k_command(runner, fixture_files):
    tmp_path, data, lexicon, _ = fixture_files
    result = runner.invoke(main, [
        "tune-k", "--data", str(data), "--lexicon", str(lexicon),
        "--candidates", "1,2",
    ])
    assert result.exit_code == 0, result.output
    assert "chosen k=" in result.output
    assert "P(same definition | judged different)" in result.output


def test_rouge_command(runner, tmp_path):
    ref = tmp_path / "ref.txt"
    cand = tmp_path / "cand.txt"
    ref.write_text("a b c d\nx y\n", encoding="utf-8")
    cand.write_text("a c\nx y\n", encoding="utf-8")
    result = runner.invoke(main, ["rouge", "--ref", str(ref),
                                  "--cand", str(cand)])
    assert result.exit_code == 0, result.output
    # pair 1: F = 2/3; pair 2: F = 1.0; mean = 5/6 -> 83.33
    assert "rouge_l_f=83.33" in result.output
    assert "pairs=2" in result.output


def test_rouge_misaligned_files(runner, tmp_path):
    ref = tmp_path / "ref.txt"
    cand = tmp_path / "cand.txt"
    ref.write_text("a\nb\n", encoding="utf-8")
    cand.write_text("a\n", encoding="utf-8")
    result = runner.invoke(main, ["rouge", "--ref", str(ref),
                                  "--cand", str(cand)])
    assert result.exit_code == 1
