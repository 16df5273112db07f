"""First-order projective dependency decoding with a single root.

Complete/incomplete spans over words 1..n, then one root attachment:
    best = max_h arc_d[0, h] + C[1, h, left] + C[h, n, right]
"""
from __future__ import annotations

from typing import Iterable, List, Optional, Tuple

import numpy as np

from jointparse.core.errors import EmptySentenceError
from jointparse.decoding.cost import arc_cost_table
from jointparse.trees.types import DTree

LEFT, RIGHT = 0, 1


def eisner(
    arc_d: np.ndarray,
    gold_heads: Optional[Iterable[int]] = None,
    arc_cost: float = 1.0,
) -> Tuple[DTree, float]:
    """Best single-root projective tree (unlabeled) and its score."""
    n = arc_d.shape[0] - 1
    if n < 1:
        raise EmptySentenceError("cannot decode an empty sentence")
    if gold_heads is not None:
        gold_arcs = [(h, m) for m, h in enumerate(gold_heads, start=1)]
        arc_d = arc_d + arc_cost_table(n, gold_arcs, arc_cost)

    complete = np.full((n + 2, n + 2, 2), -np.inf)
    incomplete = np.full((n + 2, n + 2, 2), -np.inf)
    bp_c = np.zeros((n + 2, n + 2, 2), dtype=np.int64)
    bp_i = np.zeros((n + 2, n + 2), dtype=np.int64)
    for s in range(1, n + 1):
        complete[s, s, :] = 0.0

    for w in range(1, n):
        for s in range(1, n - w + 1):
            t = s + w
            # r = s..t-1
            inner = complete[s, s:t, RIGHT] + complete[s + 1 : t + 1, t, LEFT]
            r = int(np.argmax(inner))
            bp_i[s, t] = r + s
            incomplete[s, t, LEFT] = inner[r] + arc_d[t, s]
            incomplete[s, t, RIGHT] = inner[r] + arc_d[s, t]

            # head t, r = s..t-1
            left = complete[s, s:t, LEFT] + incomplete[s:t, t, LEFT]
            r = int(np.argmax(left))
            complete[s, t, LEFT] = left[r]
            bp_c[s, t, LEFT] = r + s
            # head s, r = s+1..t
            right = incomplete[s, s + 1 : t + 1, RIGHT] + complete[s + 1 : t + 1, t, RIGHT]
            r = int(np.argmax(right))
            complete[s, t, RIGHT] = right[r]
            bp_c[s, t, RIGHT] = r + s + 1

    hs = np.arange(1, n + 1)
    root_scores = arc_d[0, 1:] + complete[1, hs, LEFT] + complete[hs, n, RIGHT]
    root = int(np.argmax(root_scores)) + 1
    score = float(root_scores[root - 1])

    heads = [0] * (n + 1)
    stack: List[Tuple[str, int, int, int]] = [("c", 1, root, LEFT), ("c", root, n, RIGHT)]
    while stack:
        kind, s, t, d = stack.pop()
        if kind == "c":
            if s == t:
                continue
            r = int(bp_c[s, t, d])
            if d == LEFT:
                stack.append(("c", s, r, LEFT))
                stack.append(("i", r, t, LEFT))
            else:
                stack.append(("i", s, r, RIGHT))
                stack.append(("c", r, t, RIGHT))
        else:
            if d == LEFT:
                heads[s] = t
            else:
                heads[t] = s
            r = int(bp_i[s, t])
            stack.append(("c", s, r, RIGHT))
            stack.append(("c", r + 1, t, LEFT))
    heads[root] = 0
    return DTree(tuple(heads[1:])), score


__all__ = ["eisner"]
