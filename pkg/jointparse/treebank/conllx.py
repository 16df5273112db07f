"""CoNLL-X dependency files (10 tab-separated columns, blank-line separated).

    ID FORM LEMMA CPOSTAG POSTAG FEATS HEAD DEPREL PHEAD PDEPREL

POS comes from POSTAG, falling back to CPOSTAG when POSTAG is "_". Trees are
validated (single root, acyclic) on read; projectivity is only logged.
"""
from __future__ import annotations

import logging
from typing import Iterable, Iterator, List, Optional, Tuple

from jointparse.core.errors import BadColumnCountError, CycleDetectedError, InvalidTreeError, MultiRootError
from jointparse.trees.compat import is_projective
from jointparse.trees.types import DTree, Sentence

logger = logging.getLogger(__name__)

N_COLUMNS = 10
EMPTY = "_"


def _sentence(rows: List[Tuple[int, List[str]]]) -> Tuple[Sentence, DTree]:
    start = rows[0][0]
    forms = [cols[1] for _, cols in rows]
    tags = [cols[4] if cols[4] != EMPTY else cols[3] for _, cols in rows]
    heads: List[int] = []
    for line, cols in rows:
        try:
            heads.append(int(cols[6]))
        except ValueError:
            raise InvalidTreeError(f"line {line}: HEAD {cols[6]!r} is not an integer") from None
    rels: Optional[Tuple[str, ...]] = tuple(cols[7] for _, cols in rows)
    if all(r == EMPTY for r in rels):  # type: ignore[union-attr]
        rels = None
    try:
        dtree = DTree(tuple(heads), rels)
    except (CycleDetectedError, MultiRootError) as e:
        raise type(e)(e.message, start) from None
    if not is_projective(dtree):
        logger.debug("non-projective sentence at line %d", start)
    pos = None if all(t == EMPTY for t in tags) else tuple(tags)
    return Sentence(tuple(forms), pos), dtree


def parse_conllx(lines: Iterable[str]) -> Iterator[Tuple[Sentence, DTree]]:
    rows: List[Tuple[int, List[str]]] = []
    lineno = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            if rows:
                yield _sentence(rows)
                rows = []
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise BadColumnCountError(f"expected {N_COLUMNS} columns, got {len(cols)}", lineno)
        if "-" in cols[0] or "." in cols[0]:
            continue
        rows.append((lineno, cols))
    if rows:
        yield _sentence(rows)


def read_conllx(path: str) -> Iterator[Tuple[Sentence, DTree]]:
    with open(path, "r", encoding="utf-8") as f:
        yield from parse_conllx(f)


def format_conllx(sentence: Sentence, dtree: DTree) -> str:
    lines = []
    for m, token in enumerate(sentence.tokens, start=1):
        tag = sentence.pos[m - 1] if sentence.pos is not None else EMPTY
        rel = dtree.rel(m) or EMPTY
        lines.append("\t".join([str(m), token, EMPTY, tag, tag, EMPTY, str(dtree.head(m)), rel, EMPTY, EMPTY]))
    return "\n".join(lines) + "\n"


def write_conllx(stream: Iterable[Tuple[Sentence, DTree]], path: str) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for sentence, dtree in stream:
            f.write(format_conllx(sentence, dtree) + "\n")
            count += 1
    return count


__all__ = ["parse_conllx", "read_conllx", "format_conllx", "write_conllx", "N_COLUMNS"]
