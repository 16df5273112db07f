"""Exhaustive reference decoder for short sentences.

Enumerates every l-tree over n words (Catalan(n-1) * 2^(n-1) of them) and
scores them all at once with fancy indexing into the tables.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from jointparse.core.errors import EmptySentenceError, TooLargeError
from jointparse.decoding.cost import CostConfig, cost_augment
from jointparse.decoding.eisner_satta import eisner_satta
from jointparse.decoding.parts import tree_parts
from jointparse.decoding.tables import ScoreTables
from jointparse.trees.types import LexSpan, LTree

logger = logging.getLogger(__name__)

MAX_ORACLE_LEN = 8

Triple = Tuple[int, int, int]


def _subtrees(i: int, j: int) -> List[Tuple[Tuple[Triple, ...], int]]:
    if i == j:
        return [(((i, i, i),), i)]
    out: List[Tuple[Tuple[Triple, ...], int]] = []
    for k in range(i, j):
        rights = _subtrees(k + 1, j)
        for left, hl in _subtrees(i, k):
            for right, hr in rights:
                for h in (hl, hr):
                    out.append((((i, j, h),) + left + right, h))
    return out


def enumerate_ltrees(n: int) -> Iterator[LTree]:
    if n < 1:
        raise EmptySentenceError("cannot enumerate trees over zero words")
    if n > MAX_ORACLE_LEN:
        raise TooLargeError(f"n={n} exceeds the oracle limit of {MAX_ORACLE_LEN}")
    for triples, _ in _subtrees(1, n):
        yield LTree(tuple(LexSpan(i, j, h) for i, j, h in triples))


@lru_cache(maxsize=MAX_ORACLE_LEN)
def _index(n: int):
    trees = list(enumerate_ltrees(n))
    parts = [tree_parts(t) for t in trees]
    spans = np.array([p.spans for p in parts], dtype=np.int64)
    arcs = np.array([p.arcs for p in parts], dtype=np.int64)
    headed = np.array([p.headed for p in parts], dtype=np.int64)
    hooked = np.array([p.hooked for p in parts], dtype=np.int64)
    return trees, spans, arcs, headed, hooked


def brute_force_argmax(
    scores: ScoreTables,
    second_order: bool = False,
    cost: Optional[CostConfig] = None,
) -> Tuple[LTree, float]:
    """Best tree by exhaustive search; exact ties go to the lexicographically smallest span set."""
    n = scores.n
    if cost is not None:
        scores = cost_augment(scores, cost)
    trees, spans, arcs, headed, hooked = _index(n)
    total = scores.span_c[spans[..., 0], spans[..., 1]].sum(axis=1)
    total = total + scores.arc_d[arcs[..., 0], arcs[..., 1]].sum(axis=1)
    if second_order:
        s2 = scores.span2o
        assert s2 is not None
        total = total + s2[headed[..., 0], headed[..., 1], headed[..., 2]].sum(axis=1)
        total = total + s2[hooked[..., 0], hooked[..., 1], hooked[..., 2]].sum(axis=1)
    best = float(total.max())
    ties = np.flatnonzero(total == best)
    winner = min((trees[t] for t in ties), key=lambda t: sorted(t.triples()))
    return winner, best


@dataclass(frozen=True)
class OracleMismatch:
    n: int
    trial: int
    second_order: bool
    cost_augmented: bool
    decoded: float
    expected: float


def verify_against_oracle(
    trials: int = 100,
    seed: int = 1,
    lengths: Sequence[int] = (2, 3, 4, 5, 6),
    orders: Sequence[bool] = (False, True),
    rel_tol: float = 1e-9,
) -> Tuple[int, List[OracleMismatch]]:
    """Compare the chart decoder with exhaustive search on random tables.

    Every case runs with and without cost augmentation against a random gold
    tree. Returns (cases checked, mismatches).
    """
    rng = np.random.default_rng(seed)
    mismatches: List[OracleMismatch] = []
    checked = 0
    for n in lengths:
        trees, *_ = _index(n)
        for trial in range(trials):
            for second_order in orders:
                scores = ScoreTables.random(n, rng, second_order=second_order)
                gold = trees[int(rng.integers(len(trees)))]
                for cost in (None, CostConfig(gold)):
                    _, got = eisner_satta(scores, second_order, cost)
                    _, want = brute_force_argmax(scores, second_order, cost)
                    checked += 1
                    if abs(got - want) > rel_tol * max(1.0, abs(want)):
                        mismatches.append(OracleMismatch(n, trial, second_order, cost is not None, got, want))
    if mismatches:
        logger.warning("oracle mismatches: %d of %d cases", len(mismatches), checked)
    return checked, mismatches


__all__ = [
    "enumerate_ltrees",
    "brute_force_argmax",
    "verify_against_oracle",
    "OracleMismatch",
    "MAX_ORACLE_LEN",
]
