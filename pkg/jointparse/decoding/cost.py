"""Cost augmentation for max-margin training.

Adding `span_cost` to every non-gold span and `arc_cost` to every non-gold
arc turns argmax s(y) into argmax s(y) + Δ(y, gold) with no change to the
decoders. The root arc (0, m) takes part in Δ like any other arc.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from jointparse.core.errors import InvalidTreeError
from jointparse.decoding.parts import tree_parts
from jointparse.decoding.tables import ScoreTables, arc_mask, span_mask
from jointparse.trees.types import LTree


@dataclass(frozen=True)
class CostConfig:
    gold: LTree
    span_cost: float = 1.0
    arc_cost: float = 1.0

    def __post_init__(self) -> None:
        if self.span_cost < 0 or self.arc_cost < 0:
            raise InvalidTreeError("costs must be non-negative")


def span_cost_table(n: int, gold_spans, span_cost: float) -> np.ndarray:
    table = np.where(span_mask(n), span_cost, 0.0)
    for i, j in gold_spans:
        table[i, j] = 0.0
    return table


def arc_cost_table(n: int, gold_arcs, arc_cost: float) -> np.ndarray:
    table = np.where(arc_mask(n), arc_cost, 0.0)
    for h, m in gold_arcs:
        table[h, m] = 0.0
    return table


def cost_augment(scores: ScoreTables, cost: CostConfig) -> ScoreTables:
    if cost.gold.n != scores.n:
        raise InvalidTreeError(f"gold covers {cost.gold.n} words, tables {scores.n}")
    parts = tree_parts(cost.gold)
    out = scores.copy()
    out.span_c = out.span_c + span_cost_table(scores.n, parts.spans, cost.span_cost)
    out.arc_d = out.arc_d + arc_cost_table(scores.n, parts.arcs, cost.arc_cost)
    return out


__all__ = ["CostConfig", "cost_augment", "span_cost_table", "arc_cost_table"]
