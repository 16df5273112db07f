"""Tree data types: sentences, constituency trees, dependency trees, l-trees.

Indexing convention used everywhere in the package:
  * words are 1..n inclusive, position 0 is the synthetic root;
  * constituents and lexicalized spans use inclusive word indices (i, j);
  * `DTree.heads[m - 1]` is the head of word m.

All types are frozen dataclasses validated on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from jointparse.core.errors import CycleDetectedError, InvalidTreeError, MultiRootError

INTERMEDIATE_SUFFIX = "*"
NULL_LABEL = "<null>"
UNARY_JOIN = "::"


def is_intermediate(label: Optional[str]) -> bool:
    """Labels removed at debinarization: `X*` spans and the NULL label."""
    return label is not None and (label == NULL_LABEL or label.endswith(INTERMEDIATE_SUFFIX))


def join_unary(labels: Sequence[str]) -> str:
    """Collapse a top-down unary chain into one label, e.g. ["S", "VP"] -> "S::VP"."""
    return UNARY_JOIN.join(labels)


def expand_label(label: str) -> List[str]:
    return label.split(UNARY_JOIN)


@dataclass(frozen=True)
class Sentence:
    tokens: Tuple[str, ...]
    pos: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if self.pos is not None:
            object.__setattr__(self, "pos", tuple(self.pos))
        if not self.tokens:
            raise InvalidTreeError("a sentence needs at least one token")
        if self.pos is not None and len(self.pos) != len(self.tokens):
            raise InvalidTreeError(f"pos length {len(self.pos)} != token count {len(self.tokens)}")

    @property
    def n(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Constituent:
    i: int
    j: int
    label: str

    def __post_init__(self) -> None:
        if not 1 <= self.i <= self.j:
            raise InvalidTreeError(f"bad constituent span ({self.i}, {self.j})")

    @property
    def span(self) -> Tuple[int, int]:
        return (self.i, self.j)


def _preorder_key(c: "Constituent | LexSpan") -> Tuple[int, int]:
    return (c.i, -c.j)


def _crossing(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    return (a[0] < b[0] <= a[1] < b[1]) or (b[0] < a[0] <= b[1] < a[1])


@dataclass(frozen=True)
class CTree:
    """Constituency tree as a preorder tuple of constituents.

    Same-span constituents (unary chains) keep their top-down order.
    """

    constituents: Tuple[Constituent, ...]
    binarized: bool = False

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.constituents, key=_preorder_key))
        object.__setattr__(self, "constituents", ordered)
        if not ordered:
            raise InvalidTreeError("empty constituency tree")
        n = max(c.j for c in ordered)
        if ordered[0].span != (1, n):
            raise InvalidTreeError(f"no full-sentence span (1, {n})")
        spans = sorted({c.span for c in ordered})
        for x in range(len(spans)):
            for y in range(x + 1, len(spans)):
                if _crossing(spans[x], spans[y]):
                    raise InvalidTreeError(f"crossing spans {spans[x]} and {spans[y]}")
        if self.binarized:
            self._check_binary(n)

    def _check_binary(self, n: int) -> None:
        spans = [c.span for c in self.constituents]
        if len(set(spans)) != len(spans):
            raise InvalidTreeError("binarized tree with duplicate spans (uncollapsed unary)")
        if len(spans) != 2 * n - 1:
            raise InvalidTreeError(f"binarized tree has {len(spans)} spans, expected {2 * n - 1}")
        present = set(spans)
        for i, j in spans:
            if i == j:
                continue
            if not any((i, k) in present and (k + 1, j) in present for k in range(i, j)):
                raise InvalidTreeError(f"span ({i}, {j}) is not split in two children")

    @property
    def n(self) -> int:
        return self.constituents[0].j

    def triples(self) -> List[Tuple[int, int, str]]:
        return [(c.i, c.j, c.label) for c in self.constituents]


@dataclass(frozen=True)
class Arc:
    h: int
    m: int
    rel: Optional[str] = None

    def __post_init__(self) -> None:
        if self.h == self.m:
            raise InvalidTreeError(f"self-loop on word {self.m}")


@dataclass(frozen=True)
class DTree:
    heads: Tuple[int, ...]
    rels: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "heads", tuple(int(h) for h in self.heads))
        if self.rels is not None:
            object.__setattr__(self, "rels", tuple(self.rels))
        n = len(self.heads)
        if n == 0:
            raise InvalidTreeError("empty dependency tree")
        if self.rels is not None and len(self.rels) != n:
            raise InvalidTreeError("rels not aligned with heads")
        for m, h in enumerate(self.heads, start=1):
            if not 0 <= h <= n:
                raise InvalidTreeError(f"head {h} of word {m} out of range")
            if h == m:
                raise CycleDetectedError(f"word {m} is its own head")
        roots = [m for m, h in enumerate(self.heads, start=1) if h == 0]
        if len(roots) > 1:
            raise MultiRootError(f"{len(roots)} words attach to the root: {roots}")
        # every word must reach the root without revisiting
        state = [0] * (n + 1)  # 0 unseen, 1 on path, 2 done
        state[0] = 2
        for start in range(1, n + 1):
            path = []
            w = start
            while state[w] == 0:
                state[w] = 1
                path.append(w)
                w = self.heads[w - 1]
            if state[w] == 1:
                raise CycleDetectedError(f"cycle through word {w}")
            for p in path:
                state[p] = 2
        if not roots:  # pragma: no cover - unreachable: no root implies a cycle
            raise CycleDetectedError("no word attaches to the root")

    @property
    def n(self) -> int:
        return len(self.heads)

    def head(self, m: int) -> int:
        return self.heads[m - 1]

    def rel(self, m: int) -> Optional[str]:
        return self.rels[m - 1] if self.rels is not None else None

    def arcs(self) -> List[Arc]:
        return [Arc(h, m, self.rel(m)) for m, h in enumerate(self.heads, start=1)]

    def root(self) -> int:
        return self.heads.index(0) + 1

    def children(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {h: [] for h in range(self.n + 1)}
        for m, h in enumerate(self.heads, start=1):
            out[h].append(m)
        return out

    def unlabeled(self) -> "DTree":
        return DTree(self.heads)


@dataclass(frozen=True)
class LexSpan:
    i: int
    j: int
    h: int
    label: Optional[str] = None

    def __post_init__(self) -> None:
        if not 1 <= self.i <= self.h <= self.j:
            raise InvalidTreeError(f"bad lexicalized span ({self.i}, {self.j}, {self.h})")

    @property
    def span(self) -> Tuple[int, int]:
        return (self.i, self.j)

    def unlabeled(self) -> Tuple[int, int, int]:
        return (self.i, self.j, self.h)


@dataclass(frozen=True)
class LTree:
    """Binarized lexicalized tree; spans kept in preorder (see `validate_ltree`)."""

    spans: Tuple[LexSpan, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "spans", tuple(sorted(self.spans, key=_preorder_key)))
        if not self.spans:
            raise InvalidTreeError("empty l-tree")

    @property
    def n(self) -> int:
        return self.spans[0].j

    @property
    def root(self) -> LexSpan:
        return self.spans[0]

    def by_span(self) -> Dict[Tuple[int, int], LexSpan]:
        return {s.span: s for s in self.spans}

    def unlabeled(self) -> "LTree":
        return LTree(tuple(LexSpan(s.i, s.j, s.h) for s in self.spans))

    def triples(self) -> FrozenSet[Tuple[int, int, int]]:
        return frozenset(s.unlabeled() for s in self.spans)

    def labels(self) -> Dict[Tuple[int, int], Optional[str]]:
        return {s.span: s.label for s in self.spans}


class CompatReason(str, Enum):
    MULTI_HEAD = "MULTI_HEAD"
    NON_PROJECTIVE = "NON_PROJECTIVE"
    NO_HEAD = "NO_HEAD"


@dataclass(frozen=True)
class CompatReport:
    compatible: bool
    offending: Tuple[Tuple[Constituent, FrozenSet[int]], ...] = field(default_factory=tuple)
    reason: Optional[CompatReason] = None
    reasons: Tuple[CompatReason, ...] = field(default_factory=tuple)


__all__ = [
    "INTERMEDIATE_SUFFIX",
    "NULL_LABEL",
    "UNARY_JOIN",
    "is_intermediate",
    "join_unary",
    "expand_label",
    "Sentence",
    "Constituent",
    "CTree",
    "Arc",
    "DTree",
    "LexSpan",
    "LTree",
    "CompatReason",
    "CompatReport",
]
