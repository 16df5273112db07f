"""Pairing constituency and dependency treebanks into joint instances."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Tuple

from pydantic import BaseModel, Field

from jointparse.core.errors import AlignmentMismatchError, EmptyCorpusError
from jointparse.treebank.brackets import escape_word, read_brackets
from jointparse.treebank.conllx import read_conllx
from jointparse.trees.binarize import head_binarize
from jointparse.trees.compat import check_compatibility
from jointparse.trees.ltree import build_ltree
from jointparse.trees.types import CompatReport, CTree, DTree, LTree, Sentence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JointInstance:
    sentence: Sentence
    ctree: CTree
    dtree: DTree
    compat: CompatReport = field(compare=False, repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.compat is None:
            object.__setattr__(self, "compat", check_compatibility(self.ctree, self.dtree))

    @property
    def compatible(self) -> bool:
        return self.compat.compatible

    @cached_property
    def ltree(self) -> LTree:
        """Labeled gold l-tree (raises IncompatibleTreeError for incompatible pairs)."""
        return build_ltree(head_binarize(self.ctree, self.dtree), self.dtree)


class CorpusStats(BaseModel):
    sentences: int = Field(..., ge=0)
    compatible: int = Field(..., ge=0)
    percentage: float = Field(..., ge=0.0, le=100.0)
    labels: Dict[str, int] = Field(default_factory=dict)
    rels: Dict[str, int] = Field(default_factory=dict)

    def summary(self) -> str:
        return f"{self.compatible}/{self.sentences} ({self.percentage:.1f}%)"


def build_vocab_stats(instances: Iterable[JointInstance]) -> Tuple[Dict[str, int], Dict[str, int]]:
    """Label and relation frequencies, keys sorted."""
    labels: Counter = Counter()
    rels: Counter = Counter()
    for inst in instances:
        labels.update(c.label for c in inst.ctree.constituents)
        if inst.dtree.rels is not None:
            rels.update(inst.dtree.rels)
    return dict(sorted(labels.items())), dict(sorted(rels.items()))


def corpus_stats(instances: List[JointInstance]) -> CorpusStats:
    if not instances:
        raise EmptyCorpusError("no sentences")
    good = sum(1 for inst in instances if inst.compatible)
    labels, rels = build_vocab_stats(instances)
    return CorpusStats(
        sentences=len(instances),
        compatible=good,
        percentage=round(100.0 * good / len(instances), 1),
        labels=labels,
        rels=rels,
    )


def pair_instances(
    brackets: Iterable[Tuple[Sentence, CTree]],
    conllx: Iterable[Tuple[Sentence, DTree]],
) -> Iterator[JointInstance]:
    """Zip the two streams positionally; token counts and (escaped) forms must agree."""
    b_iter, d_iter = iter(brackets), iter(conllx)
    index = 0
    while True:
        b = next(b_iter, None)
        d = next(d_iter, None)
        if b is None and d is None:
            return
        if b is None or d is None:
            raise AlignmentMismatchError("treebanks have different sentence counts", index)
        (b_sent, ctree), (d_sent, dtree) = b, d
        if b_sent.n != d_sent.n:
            raise AlignmentMismatchError(f"{b_sent.n} bracket tokens vs {d_sent.n} CoNLL-X tokens", index)
        # -LRB- in one file may be "(" in the other
        mismatched = [k for k, (x, y) in enumerate(zip(b_sent.tokens, d_sent.tokens)) if escape_word(x) != escape_word(y)]
        if mismatched:
            at = mismatched[0]
            raise AlignmentMismatchError(
                f"token {at + 1} differs: {b_sent.tokens[at]!r} vs {d_sent.tokens[at]!r}", index
            )
        pos = b_sent.pos if b_sent.pos is not None else d_sent.pos
        yield JointInstance(Sentence(b_sent.tokens, pos), ctree, dtree)
        index += 1


def pair_and_audit(bracket_path: str, conllx_path: str) -> Tuple[List[JointInstance], CorpusStats]:
    instances = list(pair_instances(read_brackets(bracket_path), read_conllx(conllx_path)))
    stats = corpus_stats(instances)
    logger.info("paired %s and %s: %s compatible", bracket_path, conllx_path, stats.summary())
    return instances, stats


def filter_compatible(instances: Iterable[JointInstance]) -> Iterator[JointInstance]:
    kept = dropped = 0
    for inst in instances:
        if inst.compatible:
            kept += 1
            yield inst
        else:
            dropped += 1
            logger.debug("dropping incompatible sentence reason=%s", inst.compat.reason)
    if kept == 0 and dropped:
        logger.warning("all %d instances are incompatible", dropped)
    else:
        logger.info("kept %d compatible instances, dropped %d", kept, dropped)


__all__ = [
    "JointInstance",
    "CorpusStats",
    "build_vocab_stats",
    "corpus_stats",
    "pair_instances",
    "pair_and_audit",
    "filter_compatible",
]
