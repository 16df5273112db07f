"""Compatibility between constituency and dependency trees.

A (c-tree, d-tree) pair is compatible when every constituent contains exactly
one word whose head lies outside the constituent (the root counts as
outside) and the d-tree is projective.
"""
from __future__ import annotations

import logging
from typing import FrozenSet, List, Optional, Sequence, Tuple

from jointparse.core.errors import LengthMismatchError
from jointparse.trees.types import CompatReason, CompatReport, Constituent, CTree, DTree

logger = logging.getLogger(__name__)


def external_words(heads: Sequence[int], i: int, j: int) -> FrozenSet[int]:
    """Words of [i, j] whose head is outside [i, j]; `heads[m - 1]` is the head of m."""
    return frozenset(m for m in range(i, j + 1) if not i <= heads[m - 1] <= j)


def _is_descendant(heads: Sequence[int], w: int, ancestor: int) -> bool:
    while w != 0:
        w = heads[w - 1]
        if w == ancestor:
            return True
    return ancestor == 0


def first_non_projective_arc(dtree: DTree) -> Optional[Tuple[int, int]]:
    heads = dtree.heads
    for m, h in enumerate(heads, start=1):
        lo, hi = min(h, m), max(h, m)
        for k in range(lo + 1, hi):
            if not _is_descendant(heads, k, h):
                return (h, m)
    return None


def is_projective(dtree: DTree) -> bool:
    """True iff every word strictly inside an arc descends from the arc's head."""
    return first_non_projective_arc(dtree) is None


def check_compatibility(ctree: CTree, dtree: DTree) -> CompatReport:
    if ctree.n != dtree.n:
        raise LengthMismatchError(f"c-tree covers {ctree.n} words, d-tree {dtree.n}")
    offending: List[Tuple[Constituent, FrozenSet[int]]] = []
    reasons: List[CompatReason] = []
    seen = set()
    for c in ctree.constituents:
        if c.span in seen:
            continue
        seen.add(c.span)
        ext = external_words(dtree.heads, c.i, c.j)
        if len(ext) != 1:
            offending.append((c, ext))
            reasons.append(CompatReason.MULTI_HEAD if ext else CompatReason.NO_HEAD)
    arc = first_non_projective_arc(dtree)
    if arc is not None:
        h, m = arc
        lo, hi = min(h, m), max(h, m)
        enclosing = [c for c in ctree.constituents if c.i <= lo and hi <= c.j]
        smallest = min(enclosing, key=lambda c: c.j - c.i)
        offending.append((smallest, frozenset({h, m})))
        reasons.append(CompatReason.NON_PROJECTIVE)
    if offending:
        logger.debug("incompatible pair: %d offending constituent(s)", len(offending))
        return CompatReport(False, tuple(offending), reasons[0], tuple(reasons))
    return CompatReport(True)


__all__ = ["external_words", "first_non_projective_arc", "is_projective", "check_compatibility"]
