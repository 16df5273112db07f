"""Training losses and their gradients with respect to the score tables.

hinge_loss: structured max-margin over l-trees,
    max(0, max_y [s(y) + Δ(y, gold)] - s(gold)),
    subgradient = parts(cost-augmented best) - parts(gold).
mtl_hinge_loss: the same idea applied separately to brackets (CKY) and arcs
    (Eisner), the multi-task baseline.
label_loss: softmax cross-entropy over constituent labels of every gold span
    (intermediate spans target the NULL label) and relations of every gold arc.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from jointparse.decoding.cky import cky
from jointparse.decoding.cost import CostConfig
from jointparse.decoding.eisner import eisner
from jointparse.decoding.eisner_satta import eisner_satta
from jointparse.decoding.parts import Parts, score_ltree, tree_parts
from jointparse.decoding.tables import ScoreTables
from jointparse.model.scorer import LabelScores
from jointparse.model.vocab import Vocab
from jointparse.trees.ltree import ltree_to_dtree
from jointparse.trees.types import DTree, LTree


@dataclass
class TableGrads:
    span_c: np.ndarray
    arc_d: np.ndarray
    span2o: Optional[np.ndarray] = None

    @classmethod
    def zeros(cls, n: int, second_order: bool) -> "TableGrads":
        return cls(
            np.zeros((n + 1, n + 1)),
            np.zeros((n + 1, n + 1)),
            np.zeros((n + 1, n + 1, n + 1)) if second_order else None,
        )


def _add_parts(grads: TableGrads, parts: Parts, sign: float, second_order: bool) -> None:
    for i, j in parts.spans:
        grads.span_c[i, j] += sign
    for h, m in parts.arcs:
        grads.arc_d[h, m] += sign
    if second_order and grads.span2o is not None:
        for i, j, h in parts.headed + parts.hooked:
            grads.span2o[i, j, h] += sign


def hinge_loss(
    scores: ScoreTables,
    gold: LTree,
    second_order: bool = False,
    span_cost: float = 1.0,
    arc_cost: float = 1.0,
) -> Tuple[float, TableGrads, LTree]:
    """Loss, table subgradients and the cost-augmented best tree."""
    gold = gold.unlabeled()
    best, augmented = eisner_satta(scores, second_order, CostConfig(gold, span_cost, arc_cost))
    loss = augmented - score_ltree(scores, gold, second_order)
    grads = TableGrads.zeros(scores.n, second_order)
    if loss <= 0.0:
        return 0.0, grads, best
    _add_parts(grads, tree_parts(best), 1.0, second_order)
    _add_parts(grads, tree_parts(gold), -1.0, second_order)
    return float(loss), grads, best


def mtl_hinge_loss(
    scores: ScoreTables,
    gold: LTree,
    span_cost: float = 1.0,
    arc_cost: float = 1.0,
) -> Tuple[float, TableGrads]:
    """Bracket hinge via CKY plus arc hinge via Eisner, first order only."""
    n = scores.n
    parts = tree_parts(gold)
    gold_heads = ltree_to_dtree(gold, validate=False).heads
    grads = TableGrads.zeros(n, False)
    total = 0.0

    spans, aug = cky(scores.span_c, parts.spans, span_cost)
    loss_c = aug - sum(float(scores.span_c[i, j]) for i, j in parts.spans)
    if loss_c > 0.0:
        total += loss_c
        for i, j in spans:
            grads.span_c[i, j] += 1.0
        for i, j in parts.spans:
            grads.span_c[i, j] -= 1.0

    dtree, aug = eisner(scores.arc_d, gold_heads, arc_cost)
    loss_d = aug - sum(float(scores.arc_d[h, m]) for h, m in parts.arcs)
    if loss_d > 0.0:
        total += loss_d
        for m, h in enumerate(dtree.heads, start=1):
            grads.arc_d[h, m] += 1.0
        for h, m in parts.arcs:
            grads.arc_d[h, m] -= 1.0
    return total, grads


def _cross_entropy(logits: np.ndarray, target: int) -> Tuple[float, np.ndarray]:
    shifted = logits - logits.max()
    log_z = np.log(np.exp(shifted).sum())
    probs = np.exp(shifted - log_z)
    loss = float(log_z - shifted[target])
    probs[target] -= 1.0
    return loss, probs


def label_loss(
    labels: LabelScores,
    gold: LTree,
    dtree: DTree,
    vocab: Vocab,
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Summed cross-entropy and gradients w.r.t. con_labels and dep_rels."""
    d_con = np.zeros_like(labels.con_labels)
    d_dep = np.zeros_like(labels.dep_rels)
    total = 0.0
    for s in gold.spans:
        loss, g = _cross_entropy(labels.con_labels[s.i, s.j], vocab.label_id(s.label))
        total += loss
        d_con[s.i, s.j] += g
    for arc in dtree.arcs():
        loss, g = _cross_entropy(labels.dep_rels[arc.h, arc.m], vocab.rel_id(arc.rel))
        total += loss
        d_dep[arc.h, arc.m] += g
    return total, d_con, d_dep


__all__ = ["TableGrads", "hinge_loss", "mtl_hinge_loss", "label_loss"]
