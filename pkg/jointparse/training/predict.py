"""Two-stage prediction: unlabeled decoding, then independent labeling.

The default decoder reads both trees off one l-tree, so they are always
compatible. The "separate" decoder runs CKY over span scores and Eisner over
arc scores independently; it is the baseline that can disagree.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence, Tuple

import numpy as np

from jointparse.core.errors import ConfigError
from jointparse.decoding.cky import Span, cky
from jointparse.decoding.eisner import eisner
from jointparse.decoding.eisner_satta import eisner_satta
from jointparse.decoding.tables import ScoreTables
from jointparse.model.scorer import LabelScores, ScoringModel
from jointparse.model.vocab import Vocab
from jointparse.trees.ltree import ltree_to_ctree, ltree_to_dtree, ltree_with_labels
from jointparse.trees.types import Constituent, CTree, DTree, LTree, Sentence, expand_label, is_intermediate

FALLBACK_ROOT_LABEL = "X"
DECODERS = ("joint", "separate")


def _span_label(scores: np.ndarray, vocab: Vocab, is_root: bool) -> str:
    if not is_root:
        return vocab.labels[int(np.argmax(scores))]
    removable = np.array([is_intermediate(label) for label in vocab.labels])
    if removable.all():
        return FALLBACK_ROOT_LABEL
    return vocab.labels[int(np.argmax(np.where(removable, -np.inf, scores)))]


def label_ltree(ltree: LTree, labels: LabelScores, vocab: Vocab) -> LTree:
    """Argmax label per span; the root span never takes NULL or an X* label."""
    root = ltree.root.span
    chosen: Dict[Tuple[int, int], str] = {
        s.span: _span_label(labels.con_labels[s.i, s.j], vocab, s.span == root) for s in ltree.spans
    }
    return ltree_with_labels(ltree, chosen)


def label_spans(spans: Sequence[Span], labels: LabelScores, vocab: Vocab) -> CTree:
    """Label a preorder bracketing; spans labeled NULL or X* are dropped, the first (root) is kept."""
    out: List[Constituent] = []
    for k, (i, j) in enumerate(spans):
        label = _span_label(labels.con_labels[i, j], vocab, k == 0)
        if is_intermediate(label):
            continue
        out.extend(Constituent(i, j, part) for part in expand_label(label))
    return CTree(tuple(out))


def label_arcs(dtree: DTree, labels: LabelScores, vocab: Vocab) -> DTree:
    rels = tuple(vocab.rels[int(np.argmax(labels.dep_rels[h, m]))] for m, h in enumerate(dtree.heads, start=1))
    return DTree(dtree.heads, rels)


def decode_separate(tables: ScoreTables) -> Tuple[Tuple[Span, ...], DTree]:
    """CKY bracketing and Eisner tree from the same first-order tables."""
    spans, _ = cky(tables.span_c)
    dtree, _ = eisner(tables.arc_d)
    return spans, dtree


def predict(
    model: ScoringModel,
    sentence: Sentence,
    second_order: bool = False,
    decoder: str = "joint",
) -> Tuple[CTree, DTree]:
    """Labeled c-tree and d-tree.

    Separate decoding ignores headed-span scores: neither CKY nor Eisner has
    a head and a span in the same item.
    """
    if decoder == "joint":
        tables, labels, _ = model.forward(sentence, second_order)
        tree, _ = eisner_satta(tables, second_order)
        labeled = label_ltree(tree, labels, model.vocab)
        return ltree_to_ctree(labeled), label_arcs(ltree_to_dtree(tree), labels, model.vocab)
    if decoder == "separate":
        tables, labels, _ = model.forward(sentence, False)
        spans, dtree = decode_separate(tables)
        return label_spans(spans, labels, model.vocab), label_arcs(dtree, labels, model.vocab)
    raise ConfigError(f"unknown decoder {decoder!r}; expected one of {DECODERS}")


def predict_many(
    model: ScoringModel,
    sentences: Sequence[Sentence],
    second_order: bool = False,
    workers: int = 1,
    decoder: str = "joint",
) -> List[Tuple[CTree, DTree]]:
    """Predictions in input order."""
    if workers <= 1:
        return [predict(model, s, second_order, decoder) for s in sentences]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda s: predict(model, s, second_order, decoder), sentences))


__all__ = [
    "DECODERS",
    "predict",
    "predict_many",
    "decode_separate",
    "label_ltree",
    "label_spans",
    "label_arcs",
]
