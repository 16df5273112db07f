"""Fine-grained analysis: metrics bucketed by sentence length, constituent
width and dependency length, emitted as rows for external plotting."""
from __future__ import annotations

from collections import defaultdict
from typing import Dict, Iterable, List, Sequence

from pydantic import BaseModel

from jointparse.core.errors import LengthMismatchError
from jointparse.evaluation.metrics import (
    BracketCounts,
    GoldTriple,
    PredPair,
    punct_flags,
    evaluate_corpus,
    labeled_spans,
)

SENTENCE_EDGES = (10, 20, 30, 40)
WIDTH_EDGES = (2, 4, 7, 11)
DEP_EDGES = (1, 2, 3, 4, 6)
ROOT_BUCKET = "root"


class BucketRow(BaseModel):
    kind: str
    bucket: str
    count: int
    values: Dict[str, float]


def bucket_labels(edges: Sequence[int]) -> List[str]:
    labels, start = [], 1
    for e in edges:
        labels.append(f"{start}-{e}" if start < e else str(e))
        start = e + 1
    labels.append(f"{start}+")
    return labels


def bucket_of(value: int, edges: Sequence[int]) -> str:
    labels = bucket_labels(edges)
    for label, e in zip(labels, edges):
        if value <= e:
            return label
    return labels[-1]


def _prf_row(kind: str, bucket: str, c: BracketCounts) -> BucketRow:
    return BucketRow(kind=kind, bucket=bucket, count=c.gold, values={"p": c.precision, "r": c.recall, "f1": c.f1})


def by_sentence_length(pred: Sequence[PredPair], gold: Sequence[GoldTriple], punct_tags: Iterable[str]) -> List[BucketRow]:
    groups: Dict[str, List[int]] = defaultdict(list)
    for k, (sentence, _, _) in enumerate(gold):
        groups[bucket_of(sentence.n, SENTENCE_EDGES)].append(k)
    tags = list(punct_tags)
    rows = []
    for label in bucket_labels(SENTENCE_EDGES):
        if label not in groups:
            continue
        idx = groups[label]
        m = evaluate_corpus([pred[k] for k in idx], [gold[k] for k in idx], tags)
        rows.append(
            BucketRow(
                kind="sentence_length",
                bucket=label,
                count=len(idx),
                values={"uas": m.uas, "las": m.las, "con_f1": m.con_f1, "lcm_both": m.lcm_both},
            )
        )
    return rows


def by_constituent_width(pred: Sequence[PredPair], gold: Sequence[GoldTriple]) -> List[BucketRow]:
    counts: Dict[str, BracketCounts] = defaultdict(BracketCounts)
    for (p_c, _), (_, g_c, _) in zip(pred, gold):
        p, g = labeled_spans(p_c), labeled_spans(g_c)
        matched = p & g
        for spans, attr in ((p, "predicted"), (g, "gold"), (matched, "matched")):
            for (i, j, _), c in spans.items():
                bucket = counts[bucket_of(j - i + 1, WIDTH_EDGES)]
                setattr(bucket, attr, getattr(bucket, attr) + c)
    return [_prf_row("constituent_width", b, counts[b]) for b in bucket_labels(WIDTH_EDGES) if b in counts]


def _dep_bucket(h: int, m: int) -> str:
    return ROOT_BUCKET if h == 0 else bucket_of(abs(h - m), DEP_EDGES)


def by_dependency_length(pred: Sequence[PredPair], gold: Sequence[GoldTriple], punct_tags: Iterable[str]) -> List[BucketRow]:
    """Labeled arc precision/recall per arc length; punctuation tokens skipped."""
    counts: Dict[str, BracketCounts] = defaultdict(BracketCounts)
    tags = list(punct_tags)
    for (_, p_d), (sentence, _, g_d) in zip(pred, gold):
        punct = punct_flags(sentence, tags)
        for m in range(1, g_d.n + 1):
            if punct[m - 1]:
                continue
            gh, ph = g_d.head(m), p_d.head(m)
            counts[_dep_bucket(gh, m)].gold += 1
            counts[_dep_bucket(ph, m)].predicted += 1
            if gh == ph and g_d.rel(m) == p_d.rel(m):
                counts[_dep_bucket(gh, m)].matched += 1
    order = [ROOT_BUCKET] + bucket_labels(DEP_EDGES)
    return [_prf_row("dependency_length", b, counts[b]) for b in order if b in counts]


def bucketed_metrics(
    pred: Sequence[PredPair],
    gold: Sequence[GoldTriple],
    punct_tags: Iterable[str] = (),
) -> List[BucketRow]:
    if len(pred) != len(gold):
        raise LengthMismatchError(f"{len(pred)} predictions for {len(gold)} gold sentences")
    tags = list(punct_tags)
    return (
        by_sentence_length(pred, gold, tags)
        + by_constituent_width(pred, gold)
        + by_dependency_length(pred, gold, tags)
    )


def format_buckets(rows: Sequence[BucketRow]) -> str:
    """Tab-separated table: kind, bucket, count, then metric=value pairs."""
    lines = ["kind\tbucket\tcount\tvalues"]
    for r in rows:
        values = " ".join(f"{k}={v:.2f}" for k, v in r.values.items())
        lines.append(f"{r.kind}\t{r.bucket}\t{r.count}\t{values}")
    return "\n".join(lines)


__all__ = [
    "BucketRow",
    "bucket_labels",
    "bucket_of",
    "by_sentence_length",
    "by_constituent_width",
    "by_dependency_length",
    "bucketed_metrics",
    "format_buckets",
]
