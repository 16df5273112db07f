"""Word, constituent-label and relation vocabularies."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

from jointparse.core.errors import UnknownLabelError
from jointparse.trees.types import NULL_LABEL, DTree, LTree, Sentence, is_intermediate

UNK = "<unk>"
BOS = "<bos>"
EOS = "<eos>"
NO_REL = "_"


@dataclass
class Vocab:
    words: List[str]
    labels: List[str]
    rels: List[str]
    _word_index: Dict[str, int] = field(init=False, repr=False)
    _label_index: Dict[str, int] = field(init=False, repr=False)
    _rel_index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._word_index = {w: i for i, w in enumerate(self.words)}
        self._label_index = {w: i for i, w in enumerate(self.labels)}
        self._rel_index = {w: i for i, w in enumerate(self.rels)}

    @classmethod
    def build(
        cls,
        sentences: Iterable[Sentence],
        ltrees: Iterable[LTree] = (),
        dtrees: Iterable[DTree] = (),
        min_count: int = 1,
    ) -> "Vocab":
        """Words by frequency cut-off; labels and relations sorted, NULL label first."""
        counts: Counter = Counter()
        for s in sentences:
            counts.update(s.tokens)
        words = [UNK, BOS, EOS] + sorted(w for w, c in counts.items() if c >= min_count)
        labels = sorted(
            {s.label for t in ltrees for s in t.spans if s.label is not None and not is_intermediate(s.label)}
        )
        rels = sorted({r for d in dtrees if d.rels is not None for r in d.rels})
        return cls(words, [NULL_LABEL] + labels, rels or [NO_REL])

    @property
    def unk_id(self) -> int:
        return self._word_index[UNK]

    def word_id(self, token: str) -> int:
        return self._word_index.get(token, self._word_index[UNK])

    def sentence_ids(self, sentence: Sentence) -> List[int]:
        """Ids for <bos> w_1 .. w_n <eos>."""
        return [self._word_index[BOS]] + [self.word_id(t) for t in sentence.tokens] + [self._word_index[EOS]]

    def label_id(self, label: Optional[str]) -> int:
        if label is None or is_intermediate(label):
            return self._label_index[NULL_LABEL]
        try:
            return self._label_index[label]
        except KeyError:
            raise UnknownLabelError(f"constituent label {label!r} not in vocabulary") from None

    def rel_id(self, rel: Optional[str]) -> int:
        if rel is None:
            rel = NO_REL
        try:
            return self._rel_index[rel]
        except KeyError:
            if len(self.rels) == 1 and self.rels[0] == NO_REL:
                return 0
            raise UnknownLabelError(f"dependency relation {rel!r} not in vocabulary") from None

    @property
    def null_id(self) -> int:
        return self._label_index[NULL_LABEL]

    def to_dict(self) -> Dict[str, Any]:
        return {"words": list(self.words), "labels": list(self.labels), "rels": list(self.rels)}

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "Vocab":
        return cls(list(raw["words"]), list(raw["labels"]), list(raw["rels"]))


__all__ = ["Vocab", "UNK", "BOS", "EOS", "NO_REL"]
