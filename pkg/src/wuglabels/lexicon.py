"""A flat WordNet-like sense inventory: sense_id, lemma, pos, gloss.

Per-lemma sense order is the file order, which doubles as the deterministic
tie-break order for the selection-based labelers.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from wuglabels.errors import DuplicateSenseId, EmptyField


@dataclass(frozen=True)
class Sense:
    sense_id: str
    lemma: str
    gloss: str
    pos: str | None = None
    gloss_tokens: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.gloss.strip():
            raise EmptyField(f"sense {self.sense_id!r}: empty gloss")
        if not self.gloss_tokens:
            object.__setattr__(self, "gloss_tokens", tuple(self.gloss.split()))


class Lexicon:
    """Ordered sense store with a lemma(+pos) lookup index.

    Lemma lookup is case-folded by default; pass case_sensitive=True to
    match exact strings.
    """

    def __init__(self, senses: list[Sense], language: str = "en",
                 case_sensitive: bool = False):
        self.language = language
        self.case_sensitive = case_sensitive
        self.senses: list[Sense] = []
        self._by_id: dict[str, Sense] = {}
        self._by_lemma: dict[str, list[str]] = {}
        for sense in senses:
            self._add(sense)

    def _key(self, lemma: str) -> str:
        return lemma if self.case_sensitive else lemma.casefold()

    def _add(self, sense: Sense) -> None:
        if sense.sense_id in self._by_id:
            raise DuplicateSenseId(f"duplicate sense_id {sense.sense_id!r}")
        self._by_id[sense.sense_id] = sense
        self.senses.append(sense)
        self._by_lemma.setdefault(self._key(sense.lemma), []).append(sense.sense_id)

    def __len__(self) -> int:
        return len(self.senses)

    def sense(self, sense_id: str) -> Sense:
        return self._by_id[sense_id]

    def order_of(self, sense_id: str) -> int:
        """Position of a sense in global file order (retrieval tie-breaks)."""
        return self.senses.index(self._by_id[sense_id])


def senses_of(lex: Lexicon, lemma: str, pos: str | None = None) -> list[Sense]:
    """Senses of a lemma in file order, POS-filtered when that leaves any.

    If a POS is given but no sense of the lemma carries it, all senses of the
    lemma are returned (WUG POS tags do not always align with lexicon tags).
    """
    ids = lex._by_lemma.get(lex._key(lemma), [])
    senses = [lex.sense(i) for i in ids]
    if pos is not None:
        filtered = [s for s in senses if s.pos == pos]
        if filtered:
            return filtered
    return senses


def load_lexicon(path: str | Path, language: str = "en",
                 case_sensitive: bool = False) -> Lexicon:
    """Load senses from TSV (sense_id, lemma, pos, gloss) or JSONL."""
    path = Path(path)
    senses: list[Sense] = []
    if path.suffix in (".jsonl", ".json"):
        with path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                d = json.loads(line)
                senses.append(
                    Sense(
                        sense_id=str(d["sense_id"]),
                        lemma=str(d["lemma"]),
                        gloss=str(d["gloss"]),
                        pos=d.get("pos") or None,
                    )
                )
    else:
        with path.open("r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
            for row in reader:
                senses.append(
                    Sense(
                        sense_id=row["sense_id"],
                        lemma=row["lemma"],
                        gloss=row["gloss"],
                        pos=row.get("pos") or None,
                    )
                )
    return Lexicon(senses, language=language, case_sensitive=case_sensitive)
