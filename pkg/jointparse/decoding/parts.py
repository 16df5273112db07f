"""Part decomposition of an unlabeled l-tree.

Every l-tree factors into
  * 2n-1 spans (i, j)                    -> s^c
  * n arcs (h, m), root arc (0, r) included -> s^d
  * 2n-1 headed triples (i, j, h)        -> s^span, second order
  * n hooked triples (i, j, h')          -> s^span, second order
A hooked triple is the maximal span headed by m together with m's head h'.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from jointparse.decoding.tables import ScoreTables
from jointparse.trees.ltree import children_of
from jointparse.trees.types import LTree


@dataclass(frozen=True)
class Parts:
    spans: Tuple[Tuple[int, int], ...]
    arcs: Tuple[Tuple[int, int], ...]
    headed: Tuple[Tuple[int, int, int], ...]
    hooked: Tuple[Tuple[int, int, int], ...]


def tree_parts(ltree: LTree) -> Parts:
    spans = [s.span for s in ltree.spans]
    headed = [s.unlabeled() for s in ltree.spans]
    root = ltree.root
    arcs: List[Tuple[int, int]] = [(0, root.h)]
    hooked: List[Tuple[int, int, int]] = [(root.i, root.j, 0)]
    index = ltree.by_span()
    for span, (left, right) in children_of(ltree).items():
        h = index[span].h
        dep = right if left.h == h else left
        arcs.append((h, dep.h))
        hooked.append((dep.i, dep.j, h))
    return Parts(tuple(spans), tuple(sorted(arcs, key=lambda a: a[1])), tuple(headed), tuple(hooked))


def hamming_cost(tree: LTree, gold: LTree, span_cost: float = 1.0, arc_cost: float = 1.0) -> float:
    """Number of incorrect constituents and dependencies (root arc counted), weighted."""
    p, g = tree_parts(tree), tree_parts(gold)
    wrong_spans = len(set(p.spans) - set(g.spans))
    wrong_arcs = len(set(p.arcs) - set(g.arcs))
    return span_cost * wrong_spans + arc_cost * wrong_arcs


def score_ltree(
    scores: ScoreTables,
    tree: LTree,
    second_order: bool = False,
    cost: Optional["CostConfig"] = None,  # noqa: F821
) -> float:
    """Objective of a fixed tree, identical to what the decoders maximize."""
    p = tree_parts(tree)
    total = sum(float(scores.span_c[i, j]) for i, j in p.spans)
    total += sum(float(scores.arc_d[h, m]) for h, m in p.arcs)
    if second_order:
        assert scores.span2o is not None
        total += sum(float(scores.span2o[i, j, h]) for i, j, h in p.headed)
        total += sum(float(scores.span2o[i, j, h]) for i, j, h in p.hooked)
    if cost is not None:
        total += hamming_cost(tree, cost.gold, cost.span_cost, cost.arc_cost)
    return total


__all__ = ["Parts", "tree_parts", "hamming_cost", "score_ltree"]
