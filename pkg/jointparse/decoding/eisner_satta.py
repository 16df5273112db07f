"""Joint constituency/dependency decoding over lexicalized spans.

Two charts, filled width by width:
  alpha[i, j, h]   best subtree over words i..j headed by h
  beta[i, j, h']   best subtree over i..j hooked to an outside head h'
Each (i, j) is handled as one vectorized step over (split, head), so the
python loop runs O(n^2) times and numpy does the O(n^2) inner work.
Ties resolve to the smallest split point, then the smallest head.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np

from jointparse.core.errors import EmptySentenceError, InvalidTreeError
from jointparse.decoding.cost import CostConfig, cost_augment
from jointparse.decoding.tables import ScoreTables
from jointparse.trees.types import LexSpan, LTree

logger = logging.getLogger(__name__)

NEG_INF = -np.inf


def eisner_satta(
    scores: ScoreTables,
    second_order: bool = False,
    cost: Optional[CostConfig] = None,
) -> Tuple[LTree, float]:
    """Highest-scoring unlabeled l-tree and its (cost-augmented) score."""
    n = scores.n
    if n < 1:
        raise EmptySentenceError("cannot decode an empty sentence")
    if second_order and scores.span2o is None:
        raise InvalidTreeError("second-order decoding needs span scores")
    if cost is not None:
        scores = cost_augment(scores, cost)
    s_c = scores.span_c
    s_d = scores.arc_d
    s2 = scores.span2o if second_order else None

    size = n + 2
    alpha = np.full((size, size, n + 1), NEG_INF)
    beta = np.full((size, size, n + 1), NEG_INF)
    split = np.zeros((size, size, n + 1), dtype=np.int64)
    attach = np.zeros((size, size, n + 1), dtype=np.int64)
    rows = np.arange(n + 1)

    for w in range(1, n + 1):
        for i in range(1, n - w + 2):
            j = i + w - 1
            hs = slice(i, j + 1)
            if w == 1:
                alpha[i, i, i] = s_c[i, i] + (s2[i, i, i] if s2 is not None else 0.0)
            else:
                # rows: split k = i..j-1, columns: head h = i..j
                left_headed = alpha[i, i:j, hs] + beta[i + 1 : j + 1, j, hs]
                right_headed = beta[i, i:j, hs] + alpha[i + 1 : j + 1, j, hs]
                cand = np.maximum(left_headed, right_headed)
                best_k = np.argmax(cand, axis=0)
                best = cand[best_k, np.arange(w)]
                if s2 is not None:
                    best = best + s2[i, j, hs]
                alpha[i, j, hs] = s_c[i, j] + best
                split[i, j, hs] = best_k + i

            hooked = alpha[i, j, hs][None, :] + s_d[:, hs]
            best_h = np.argmax(hooked, axis=1)
            value = hooked[rows, best_h]
            if s2 is not None:
                value = value + s2[i, j, :]
            outside = np.ones(n + 1, dtype=bool)
            outside[hs] = False
            beta[i, j, outside] = value[outside]
            attach[i, j, outside] = best_h[outside] + i

    score = float(beta[1, n, 0])
    tree = _backtrack(n, split, attach)
    logger.debug("decoded n=%d second_order=%s score=%.4f", n, second_order, score)
    return tree, score


def _backtrack(n: int, split: np.ndarray, attach: np.ndarray) -> LTree:
    spans: List[LexSpan] = []
    stack = [(1, n, int(attach[1, n, 0]))]
    while stack:
        i, j, h = stack.pop()
        spans.append(LexSpan(i, j, h))
        if i == j:
            continue
        k = int(split[i, j, h])
        if h <= k:
            left = (i, k, h)
            right = (k + 1, j, int(attach[k + 1, j, h]))
        else:
            left = (i, k, int(attach[i, k, h]))
            right = (k + 1, j, h)
        stack.append(right)
        stack.append(left)
    return LTree(tuple(spans))


__all__ = ["eisner_satta"]
