"""Parsing metrics: attachment scores, labeled bracket P/R/F1, complete match.

Corpus figures aggregate counts, never per-sentence percentages. A metric
whose denominator is zero (e.g. a corpus made only of punctuation) reads
100.0 and sets the matching `*_empty` flag.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from jointparse.core.errors import EmptyCorpusError, LengthMismatchError
from jointparse.trees.types import CTree, DTree, Sentence, expand_label

GoldTriple = Tuple[Sentence, CTree, DTree]
PredPair = Tuple[CTree, DTree]


@dataclass
class AttachmentCounts:
    uas_correct: int = 0
    las_correct: int = 0
    total: int = 0

    def __iadd__(self, other: "AttachmentCounts") -> "AttachmentCounts":
        self.uas_correct += other.uas_correct
        self.las_correct += other.las_correct
        self.total += other.total
        return self


@dataclass
class BracketCounts:
    matched: int = 0
    predicted: int = 0
    gold: int = 0

    def __iadd__(self, other: "BracketCounts") -> "BracketCounts":
        self.matched += other.matched
        self.predicted += other.predicted
        self.gold += other.gold
        return self

    @property
    def precision(self) -> float:
        return 100.0 * self.matched / self.predicted if self.predicted else 0.0

    @property
    def recall(self) -> float:
        return 100.0 * self.matched / self.gold if self.gold else 0.0

    @property
    def f1(self) -> float:
        return f1_score(self.precision, self.recall)


def f1_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def percent(correct: int, total: int) -> float:
    return 100.0 * correct / total if total else 100.0


def attachment_scores(pred: DTree, gold: DTree, punct: Optional[Sequence[bool]] = None) -> AttachmentCounts:
    if pred.n != gold.n:
        raise LengthMismatchError(f"predicted tree has {pred.n} words, gold {gold.n}")
    punct = punct or [False] * gold.n
    counts = AttachmentCounts()
    for m in range(1, gold.n + 1):
        if punct[m - 1]:
            continue
        counts.total += 1
        if pred.head(m) == gold.head(m):
            counts.uas_correct += 1
            if pred.rel(m) == gold.rel(m):
                counts.las_correct += 1
    return counts


def labeled_spans(ctree: CTree) -> Counter:
    """Multiset of (i, j, label) with collapsed unary labels expanded."""
    return Counter((c.i, c.j, part) for c in ctree.constituents for part in expand_label(c.label))


def constituent_prf(pred: CTree, gold: CTree) -> BracketCounts:
    p, g = labeled_spans(pred), labeled_spans(gold)
    return BracketCounts(sum((p & g).values()), sum(p.values()), sum(g.values()))


def complete_match(pred: PredPair, gold: PredPair) -> Tuple[bool, bool, bool]:
    con = labeled_spans(pred[0]) == labeled_spans(gold[0])
    dep = pred[1].heads == gold[1].heads and all(pred[1].rel(m) == gold[1].rel(m) for m in range(1, gold[1].n + 1))
    return con, dep, con and dep


class Metrics(BaseModel):
    uas: float = Field(..., ge=0.0, le=100.0)
    las: float = Field(..., ge=0.0, le=100.0)
    con_p: float = Field(..., ge=0.0, le=100.0)
    con_r: float = Field(..., ge=0.0, le=100.0)
    con_f1: float = Field(..., ge=0.0, le=100.0)
    lcm_con: float = Field(..., ge=0.0, le=100.0)
    lcm_dep: float = Field(..., ge=0.0, le=100.0)
    lcm_both: float = Field(..., ge=0.0, le=100.0)
    sentences: int = 0
    dep_total: int = 0
    uas_correct: int = 0
    las_correct: int = 0
    con_matched: int = 0
    con_predicted: int = 0
    con_gold: int = 0
    dep_empty: bool = False


def punct_flags(sentence: Sentence, punct_tags: Iterable[str]) -> List[bool]:
    if sentence.pos is None:
        return [False] * sentence.n
    tags = set(punct_tags)
    return [t in tags for t in sentence.pos]


def evaluate_corpus(
    pred: Sequence[PredPair],
    gold: Sequence[GoldTriple],
    punct_tags: Iterable[str] = (),
) -> Metrics:
    if len(pred) != len(gold):
        raise LengthMismatchError(f"{len(pred)} predictions for {len(gold)} gold sentences")
    if not gold:
        raise EmptyCorpusError("nothing to evaluate")
    tags = list(punct_tags)
    att = AttachmentCounts()
    brk = BracketCounts()
    lcm = [0, 0, 0]
    for (p_c, p_d), (sentence, g_c, g_d) in zip(pred, gold):
        att += attachment_scores(p_d, g_d, punct_flags(sentence, tags))
        brk += constituent_prf(p_c, g_c)
        for k, flag in enumerate(complete_match((p_c, p_d), (g_c, g_d))):
            lcm[k] += int(flag)
    n = len(gold)
    return Metrics(
        uas=percent(att.uas_correct, att.total),
        las=percent(att.las_correct, att.total),
        con_p=brk.precision,
        con_r=brk.recall,
        con_f1=brk.f1,
        lcm_con=percent(lcm[0], n),
        lcm_dep=percent(lcm[1], n),
        lcm_both=percent(lcm[2], n),
        sentences=n,
        dep_total=att.total,
        uas_correct=att.uas_correct,
        las_correct=att.las_correct,
        con_matched=brk.matched,
        con_predicted=brk.predicted,
        con_gold=brk.gold,
        dep_empty=att.total == 0,
    )


_PERCENT_FIELDS = ("uas", "las", "con_p", "con_r", "con_f1", "lcm_con", "lcm_dep", "lcm_both")


def average_metrics(runs: Sequence[Metrics]) -> Metrics:
    """Mean of the percentage fields across runs (e.g. seeds); counts are summed."""
    if not runs:
        raise EmptyCorpusError("no runs to average")
    values = {k: sum(getattr(m, k) for m in runs) / len(runs) for k in _PERCENT_FIELDS}
    for k in ("sentences", "dep_total", "uas_correct", "las_correct", "con_matched", "con_predicted", "con_gold"):
        values[k] = sum(getattr(m, k) for m in runs)
    values["dep_empty"] = all(m.dep_empty for m in runs)
    return Metrics(**values)


def format_metrics(m: Metrics) -> str:
    lines = [f"{k}: {getattr(m, k):.2f}" for k in _PERCENT_FIELDS]
    lines.append(f"sentences: {m.sentences}")
    lines.append(f"dependencies: {m.uas_correct}/{m.dep_total}")
    lines.append(f"constituents: {m.con_matched} matched, {m.con_predicted} predicted, {m.con_gold} gold")
    if m.dep_empty:
        lines.append("note: no non-punctuation tokens, attachment scores are vacuous")
    return "\n".join(lines)


__all__ = [
    "Metrics",
    "AttachmentCounts",
    "BracketCounts",
    "attachment_scores",
    "constituent_prf",
    "complete_match",
    "labeled_spans",
    "evaluate_corpus",
    "average_metrics",
    "format_metrics",
    "f1_score",
    "percent",
    "punct_flags",
]
