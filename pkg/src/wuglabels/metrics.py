"""Metric kernels: ROUGE-L, nominal Krippendorff's alpha, evaluation scores."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from wuglabels import kernels
from wuglabels.errors import EmptySet, InsufficientData

OUTCOMES = ("correct", "wrong", "both", "none", "unresolved")


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f: float


def lcs_length(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Longest common subsequence (not substring) length of two token lists."""
    ids: dict[Hashable, int] = {}
    a_ids = [ids.setdefault(t, len(ids)) for t in a]
    b_ids = [ids.setdefault(t, len(ids)) for t in b]
    return int(kernels.lcs_length(a_ids, b_ids))


def rouge_l(reference: str, candidate: str) -> RougeScore:
    """ROUGE-L with balanced F (beta=1), whitespace tokens, lowercased."""
    ref = reference.lower().split()
    cand = candidate.lower().split()
    if not ref or not cand:
        return RougeScore(0.0, 0.0, 0.0)
    lcs = lcs_length(ref, cand)
    recall = lcs / len(ref)
    precision = lcs / len(cand)
    if recall + precision == 0.0:
        return RougeScore(0.0, 0.0, 0.0)
    return RougeScore(
        recall=recall,
        precision=precision,
        f=2.0 * recall * precision / (recall + precision),
    )


def krippendorff_alpha(
    data: Mapping[Hashable, Mapping[Hashable, Hashable]]
    | Sequence[Sequence[Hashable | None]],
) -> float:
    """Nominal-level alpha via the coincidence-matrix formulation.

    `data` is unit -> annotator -> label (or a row-per-unit matrix with None
    for missing). Units with fewer than two labels are excluded; at least two
    pairable units must remain.
    """
    if isinstance(data, Mapping):
        units = [list(labels.values()) for labels in data.values()]
    else:
        units = [[v for v in row if v is not None] for row in data]
    units = [u for u in units if len(u) >= 2]
    if len(units) < 2:
        raise InsufficientData(
            f"need at least 2 units with 2+ labels, got {len(units)}"
        )

    coincidence: Counter[tuple[Hashable, Hashable]] = Counter()
    totals: Counter[Hashable] = Counter()
    n = 0.0
    for values in units:
        m = len(values)
        weight = 1.0 / (m - 1)
        for i, vi in enumerate(values):
            for j, vj in enumerate(values):
                if i != j:
                    coincidence[(vi, vj)] += weight
                    totals[vi] += weight
        n += m

    observed = sum(c for (vi, vj), c in coincidence.items() if vi != vj) / n
    expected = sum(
        totals[vi] * totals[vj]
        for vi in totals
        for vj in totals
        if vi != vj
    ) / (n * (n - 1.0))
    if expected == 0.0:
        return 1.0  # a single label everywhere: perfect agreement
    return 1.0 - observed / expected


@dataclass(frozen=True)
class EvalScores:
    """Outcome percentages over one evaluation group (Table-4-style row)."""

    total: int
    accuracy: float
    fits_both_pct: float
    fits_none_pct: float
    wrong_pct: float
    unresolved_pct: float
    unresolved: int


def eval_scores(outcomes: Iterable[str]) -> EvalScores:
    """Accuracy plus 'fits both'/'fits none' percentages over item outcomes.

    Unresolved items stay in the denominator and are reported separately.
    """
    counts = Counter(outcomes)
    unknown = set(counts) - set(OUTCOMES)
    if unknown:
        raise ValueError(f"unknown outcome(s): {sorted(unknown)}")
    total = sum(counts.values())
    if total == 0:
        raise EmptySet("no outcomes to score")
    pct = lambda c: 100.0 * c / total  # noqa: E731
    return EvalScores(
        total=total,
        accuracy=pct(counts["correct"]),
        fits_both_pct=pct(counts["both"]),
        fits_none_pct=pct(counts["none"]),
        wrong_pct=pct(counts["wrong"]),
        unresolved_pct=pct(counts["unresolved"]),
        unresolved=counts["unresolved"],
    )
