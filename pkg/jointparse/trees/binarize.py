"""Head-binarization of n-ary constituency trees.

The n-ary tree is rebuilt as nodes (children are sub-nodes or bare word
indices), unary chains are collapsed into `A::B` labels, and every node with
more than two children is split so that each introduced span keeps exactly
one externally-linked word under the given d-tree.

Split preference at a node with children c_1..c_r:
  1. left-binarization  (c_1..c_{r-1} | c_r)
  2. right-binarization (c_1 | c_2..c_r)
  3. interior splits, right to left
The first split whose two word spans are both single-headed wins.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Union

from jointparse.core.errors import IncompatibleTreeError, LengthMismatchError
from jointparse.trees.compat import external_words
from jointparse.trees.types import INTERMEDIATE_SUFFIX, Constituent, CTree, DTree, join_unary


@dataclass
class Node:
    label: str
    i: int
    j: int
    children: List[Union["Node", int]] = field(default_factory=list)


Item = Union[Node, int]


def _lo(item: Item) -> int:
    return item if isinstance(item, int) else item.i


def _hi(item: Item) -> int:
    return item if isinstance(item, int) else item.j


def build_nodes(ctree: CTree) -> Node:
    """Rebuild the node hierarchy of a c-tree; uncovered words become bare children."""
    root: Node | None = None
    stack: List[Node] = []
    for c in ctree.constituents:
        node = Node(c.label, c.i, c.j)
        while stack and not (stack[-1].i <= c.i and c.j <= stack[-1].j):
            stack.pop()
        if stack:
            stack[-1].children.append(node)
        else:
            root = node
        stack.append(node)
    assert root is not None
    _fill_words(root)
    return root


def _fill_words(node: Node) -> None:
    subs = [c for c in node.children if isinstance(c, Node)]
    for sub in subs:
        _fill_words(sub)
    items: List[Item] = []
    w = node.i
    for sub in subs:
        items.extend(range(w, sub.i))
        items.append(sub)
        w = sub.j + 1
    items.extend(range(w, node.j + 1))
    node.children = items


def collapse_unaries(node: Node) -> Node:
    """Merge same-span parent/child chains bottom-up into one `A::B` node."""
    node.children = [c if isinstance(c, int) else collapse_unaries(c) for c in node.children]
    if len(node.children) == 1 and isinstance(node.children[0], Node):
        child = node.children[0]
        return Node(join_unary([node.label, child.label]), node.i, node.j, child.children)
    return node


def _single_headed(heads: Sequence[int], items: Sequence[Item]) -> bool:
    return len(external_words(heads, _lo(items[0]), _hi(items[-1]))) == 1


def _split_order(r: int) -> List[int]:
    """Candidate sizes of the left part, in preference order."""
    order = [r - 1, 1] + list(range(r - 2, 1, -1))
    seen: List[int] = []
    for s in order:
        if 1 <= s < r and s not in seen:
            seen.append(s)
    return seen


def _emit(item: Item, base_label: str, heads: Sequence[int], out: List[Constituent]) -> None:
    if isinstance(item, int):
        out.append(Constituent(item, item, base_label + INTERMEDIATE_SUFFIX))
    else:
        _binarize_node(item, heads, out)


def _binarize_seq(items: Sequence[Item], label: str, base_label: str, heads: Sequence[int], out: List[Constituent]) -> None:
    out.append(Constituent(_lo(items[0]), _hi(items[-1]), label))
    for s in _split_order(len(items)):
        left, right = items[:s], items[s:]
        if _single_headed(heads, left) and _single_headed(heads, right):
            break
    else:
        raise IncompatibleTreeError(
            f"no single-headed split for {label} ({_lo(items[0])}, {_hi(items[-1])})"
        )
    for part in (left, right):
        if len(part) == 1:
            _emit(part[0], base_label, heads, out)
        else:
            _binarize_seq(part, base_label + INTERMEDIATE_SUFFIX, base_label, heads, out)


def _binarize_node(node: Node, heads: Sequence[int], out: List[Constituent]) -> None:
    if node.i == node.j:
        out.append(Constituent(node.i, node.j, node.label))
        return
    _binarize_seq(node.children, node.label, node.label, heads, out)


def head_binarize(ctree: CTree, dtree: DTree) -> CTree:
    """CNF c-tree whose every span is single-headed under `dtree`."""
    if ctree.n != dtree.n:
        raise LengthMismatchError(f"c-tree covers {ctree.n} words, d-tree {dtree.n}")
    root = collapse_unaries(build_nodes(ctree))
    out: List[Constituent] = []
    _binarize_node(root, dtree.heads, out)
    return CTree(tuple(out), binarized=True)


__all__ = ["Node", "build_nodes", "collapse_unaries", "head_binarize"]
