"""Lexicalized trees: construction from (binarized c-tree, d-tree) and recovery.

An l-tree is the joint representation: every binarized span carries its
unique head word. Dropping heads gives back the c-tree; reading head words at
binary nodes gives back the unlabeled d-tree.
"""
from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Tuple

from jointparse.core.errors import IncompatibleTreeError, InvalidTreeError, LengthMismatchError
from jointparse.trees.compat import external_words, is_projective
from jointparse.trees.types import (
    Constituent,
    CTree,
    DTree,
    LexSpan,
    LTree,
    expand_label,
    is_intermediate,
)

Split = Tuple[LexSpan, LexSpan]


def build_ltree(ctree: CTree, dtree: DTree) -> LTree:
    if ctree.n != dtree.n:
        raise LengthMismatchError(f"c-tree covers {ctree.n} words, d-tree {dtree.n}")
    spans: List[LexSpan] = []
    for c in ctree.constituents:
        ext = external_words(dtree.heads, c.i, c.j)
        if len(ext) != 1:
            raise IncompatibleTreeError(f"span ({c.i}, {c.j}) {c.label} has external words {sorted(ext)}")
        spans.append(LexSpan(c.i, c.j, next(iter(ext)), c.label))
    ltree = LTree(tuple(spans))
    validate_ltree(ltree)
    return ltree


def children_of(ltree: LTree) -> Dict[Tuple[int, int], Split]:
    """Map every non-leaf span to its (left, right) children."""
    index = ltree.by_span()
    out: Dict[Tuple[int, int], Split] = {}
    for s in ltree.spans:
        if s.i == s.j:
            continue
        for k in range(s.i, s.j):
            left, right = index.get((s.i, k)), index.get((k + 1, s.j))
            if left is not None and right is not None:
                out[s.span] = (left, right)
                break
    return out


def validate_ltree(ltree: LTree, n: Optional[int] = None) -> None:
    """Raise InvalidTreeError unless `ltree` satisfies every l-tree invariant."""
    n = ltree.n if n is None else n
    spans = ltree.spans
    if ltree.root.span != (1, n):
        raise InvalidTreeError(f"root span {ltree.root.span} does not cover 1..{n}")
    if len(spans) != 2 * n - 1:
        raise InvalidTreeError(f"{len(spans)} spans, expected {2 * n - 1}")
    if len({s.span for s in spans}) != len(spans):
        raise InvalidTreeError("duplicate spans")
    kids = children_of(ltree)
    reached = 0
    stack = [ltree.root]
    while stack:
        s = stack.pop()
        reached += 1
        if s.i == s.j:
            if s.h != s.i:
                raise InvalidTreeError(f"leaf ({s.i}, {s.i}) headed by {s.h}")
            continue
        if s.span not in kids:
            raise InvalidTreeError(f"span {s.span} has no binary split")
        left, right = kids[s.span]
        head_child = left if s.h <= left.j else right
        if head_child.h != s.h:
            raise InvalidTreeError(f"span {s.span} head {s.h} not inherited from its head child")
        stack.extend((right, left))
    if reached != len(spans):
        raise InvalidTreeError("spans do not form a single binary tree")
    if not is_projective(ltree_to_dtree(ltree, validate=False)):  # pragma: no cover - implied by the above
        raise InvalidTreeError("induced d-tree is not projective")


def ltree_to_dtree(ltree: LTree, validate: bool = True) -> DTree:
    """Unlabeled d-tree induced by the head words of a valid l-tree."""
    if validate:
        validate_ltree(ltree)
    heads = [0] * ltree.n
    index = ltree.by_span()
    for span, (left, right) in children_of(ltree).items():
        h = index[span].h
        dependent = right.h if left.h == h else left.h
        heads[dependent - 1] = h
    heads[ltree.root.h - 1] = 0
    return DTree(tuple(heads))


def ltree_to_ctree(ltree: LTree) -> CTree:
    """Drop heads, remove intermediate spans and re-expand collapsed unaries."""
    out: List[Constituent] = []
    for s in ltree.spans:
        if s.label is None:
            raise InvalidTreeError(f"span {s.span} has no label")
        if is_intermediate(s.label):
            continue
        out.extend(Constituent(s.i, s.j, part) for part in expand_label(s.label))
    return CTree(tuple(out))


def ltree_with_labels(ltree: LTree, labels: Mapping[Tuple[int, int], str]) -> LTree:
    return LTree(tuple(LexSpan(s.i, s.j, s.h, labels[s.span]) for s in ltree.spans))


__all__ = [
    "build_ltree",
    "children_of",
    "validate_ltree",
    "ltree_to_dtree",
    "ltree_to_ctree",
    "ltree_with_labels",
]
