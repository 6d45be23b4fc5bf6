"""Definition datasets (usage/definition pairs) and their summary statistics."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from wuglabels.errors import EmptyField, UndefinedRatio, UnknownSplit

SPLITS = ("train", "validation", "test")

TokenCounter = Callable[[str], int]


def whitespace_token_count(text: str) -> int:
    return len(text.split())


@dataclass(frozen=True)
class DefinitionExample:
    lemma: str
    usage_text: str
    definition_text: str
    language: str = ""
    split: str = "train"


@dataclass(frozen=True)
class DatasetStats:
    """Distributional summary of a definition dataset.

    Lengths are computed under the token counter recorded in `counter_name`
    (default: whitespace tokens); the sd is the population sd (divide by N).
    """

    entries: int
    lemmas: int
    ratio: float
    usage_len_mean: float
    usage_len_sd: float
    definition_len_mean: float
    definition_len_sd: float
    counter_name: str = "whitespace"


def load_definition_dataset(path: str | Path) -> list[DefinitionExample]:
    """Read JSONL rows with keys lemma, usage, definition, language, split."""
    path = Path(path)
    examples = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            usage = str(d.get("usage", "")).strip()
            definition = str(d.get("definition", "")).strip()
            if not usage:
                raise EmptyField(f"{path}:{lineno}: empty usage")
            if not definition:
                raise EmptyField(f"{path}:{lineno}: empty definition")
            split = d.get("split", "train")
            if split not in SPLITS:
                raise UnknownSplit(f"{path}:{lineno}: unknown split {split!r}")
            examples.append(
                DefinitionExample(
                    lemma=str(d["lemma"]),
                    usage_text=usage,
                    definition_text=definition,
                    language=d.get("language", ""),
                    split=split,
                )
            )
    return examples


def split_counts(data: Iterable[DefinitionExample]) -> dict[str, int]:
    counts = {s: 0 for s in SPLITS}
    for ex in data:
        counts[ex.split] += 1
    return counts


def _mean_sd(values: list[int]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(var)


def dataset_stats(
    data: list[DefinitionExample],
    counter: TokenCounter = whitespace_token_count,
    counter_name: str = "whitespace",
) -> DatasetStats:
    if not data:
        raise UndefinedRatio("entries/lemmas ratio is undefined on an empty dataset")
    usage_lens = [counter(ex.usage_text) for ex in data]
    def_lens = [counter(ex.definition_text) for ex in data]
    lemmas = len({ex.lemma for ex in data})
    u_mean, u_sd = _mean_sd(usage_lens)
    d_mean, d_sd = _mean_sd(def_lens)
    return DatasetStats(
        entries=len(data),
        lemmas=lemmas,
        ratio=len(data) / lemmas,
        usage_len_mean=u_mean,
        usage_len_sd=u_sd,
        definition_len_mean=d_mean,
        definition_len_sd=d_sd,
        counter_name=counter_name,
    )
