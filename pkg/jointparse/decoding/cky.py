"""First-order constituency decoding (unlexicalized binary trees)."""
from __future__ import annotations

from typing import Iterable, List, Optional, Tuple

import numpy as np

from jointparse.core.errors import EmptySentenceError
from jointparse.decoding.cost import span_cost_table

Span = Tuple[int, int]


def cky(
    span_c: np.ndarray,
    gold_spans: Optional[Iterable[Span]] = None,
    span_cost: float = 1.0,
) -> Tuple[Tuple[Span, ...], float]:
    """Best binary bracketing under span scores; spans come back in preorder.

    With `gold_spans`, every non-gold span gets `span_cost` added.
    """
    n = span_c.shape[0] - 1
    if n < 1:
        raise EmptySentenceError("cannot decode an empty sentence")
    if gold_spans is not None:
        span_c = span_c + span_cost_table(n, gold_spans, span_cost)
    best = np.full((n + 2, n + 2), -np.inf)
    split = np.zeros((n + 2, n + 2), dtype=np.int64)
    for w in range(1, n + 1):
        for i in range(1, n - w + 2):
            j = i + w - 1
            if w == 1:
                best[i, i] = span_c[i, i]
                continue
            cand = best[i, i:j] + best[i + 1 : j + 1, j]
            k = int(np.argmax(cand))
            best[i, j] = span_c[i, j] + cand[k]
            split[i, j] = k + i

    spans: List[Span] = []
    stack = [(1, n)]
    while stack:
        i, j = stack.pop()
        spans.append((i, j))
        if i < j:
            k = int(split[i, j])
            stack.append((k + 1, j))
            stack.append((i, k))
    return tuple(spans), float(best[1, n])


__all__ = ["cky"]
