"""Bracketed constituency trees: reading, cleaning, canonical writing.

The s-expression grammar is pyparsing's classic nested-list form. A file may
hold one tree per line or pretty-printed trees; top-level trees are split
by paren depth first so errors can point at a line and column.

Cleaning on read:
  * function tags are cut at the first "-" or "=" (labels starting with "-"
    such as -LRB- are kept whole);
  * -NONE- subtrees are removed, together with nodes left empty;
  * an unlabeled wrapper around a single tree is dropped;
  * preterminals (a node over exactly one word) become the word's POS tag;
  * -LRB- / -RRB- inside words read back as "(" / ")", and are written
    that way so any token survives a round trip.
"""
from __future__ import annotations

import logging
import re
from typing import Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple, Union

import pyparsing as pp

from jointparse.core.errors import BracketParseError, UnbalancedParensError
from jointparse.trees.binarize import Node, build_nodes
from jointparse.trees.ltree import children_of
from jointparse.trees.types import Constituent, CTree, LexSpan, LTree, Sentence

logger = logging.getLogger(__name__)

NO_POS = "_"
EMPTY_ELEMENT = "-NONE-"

# words only; labels and tags are written as they are
_WORD_ESCAPES = (("(", "-LRB-"), (")", "-RRB-"))

LPAR, RPAR = map(pp.Suppress, "()")
_TOKEN = pp.Regex(r"[^()\s]+")
_SEXP = pp.Forward()
_SEXP <<= _TOKEN | pp.Group(LPAR + pp.ZeroOrMore(_SEXP) + RPAR)
_TREE = pp.Group(LPAR + pp.ZeroOrMore(_SEXP) + RPAR)

_HEADED_LABEL = re.compile(r"^(.*)\[(\d+)\]$")

Raw = Union[str, list]


def escape_word(word: str) -> str:
    """Bracket-safe form of a word: parentheses become -LRB- / -RRB-."""
    for raw, escaped in _WORD_ESCAPES:
        word = word.replace(raw, escaped)
    return word


def unescape_word(word: str) -> str:
    for raw, escaped in _WORD_ESCAPES:
        word = word.replace(escaped, raw)
    return word


def split_trees(text: str) -> Iterator[Tuple[str, int, int]]:
    """Yield (tree text, line, column) for every top-level parenthesized tree."""
    depth = 0
    start = 0
    start_line = start_col = 0
    line, col = 1, 0
    for pos, ch in enumerate(text):
        if ch == "\n":
            line += 1
            col = 0
            continue
        col += 1
        if ch == "(":
            if depth == 0:
                start, start_line, start_col = pos, line, col
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise UnbalancedParensError("unexpected ')'", line, col)
            if depth == 0:
                yield text[start : pos + 1], start_line, start_col
        elif depth == 0 and not ch.isspace():
            raise BracketParseError(f"text outside of a tree: {ch!r}", line, col)
    if depth > 0:
        raise UnbalancedParensError(f"{depth} unclosed '('", start_line, start_col)


def parse_sexp(chunk: str, line: int = 1, column: int = 1) -> list:
    try:
        return _TREE.parse_string(chunk, parse_all=True).as_list()[0]
    except pp.ParseException as e:
        col = e.col + (column - 1 if e.lineno == 1 else 0)
        raise BracketParseError(f"malformed tree: {e.msg}", line + e.lineno - 1, col) from None


def strip_function_tags(label: str) -> str:
    if not label or label.startswith("-"):
        return label
    return re.split(r"[-=]", label, maxsplit=1)[0] or label


def _split_node(node: list) -> Tuple[str, List[Raw]]:
    if node and isinstance(node[0], str):
        return node[0], list(node[1:])
    return "", list(node)


def _remove_empty(node: Raw) -> Optional[Raw]:
    if isinstance(node, str):
        return node
    label, children = _split_node(node)
    if label == EMPTY_ELEMENT:
        return None
    kept = [c for c in (_remove_empty(c) for c in children) if c is not None]
    if not kept:
        return None
    return [label] + kept


def _is_preterminal(children: Sequence[Raw]) -> bool:
    return len(children) == 1 and isinstance(children[0], str)


def tree_from_sexp(node: list, line: Optional[int] = None) -> Tuple[Sentence, CTree]:
    cleaned = _remove_empty(node)
    if cleaned is None or isinstance(cleaned, str):
        raise BracketParseError("tree has no words", line)
    label, children = _split_node(cleaned)
    while label == "" and len(children) == 1 and isinstance(children[0], list):
        label, children = _split_node(children[0])
    if label == "":
        raise BracketParseError("unlabeled root over several children", line)

    words: List[str] = []
    tags: List[str] = []
    out: List[Constituent] = []
    if _is_preterminal(children):
        words.append(unescape_word(children[0]))  # type: ignore[arg-type]
        tags.append(NO_POS)
        out.append(Constituent(1, 1, strip_function_tags(label)))
    else:
        _collect(label, children, words, tags, out, line)
    pos = None if all(t == NO_POS for t in tags) else tuple(tags)
    return Sentence(tuple(words), pos), CTree(tuple(out))


def _collect(label: str, children: List[Raw], words: List[str], tags: List[str], out: List[Constituent], line: Optional[int]) -> None:
    if not children:
        raise BracketParseError(f"constituent {label!r} has no children", line)
    start = len(words) + 1
    slot = len(out)
    out.append(Constituent(1, 1, label))  # placeholder, patched below
    for child in children:
        if isinstance(child, str):
            words.append(unescape_word(child))
            tags.append(NO_POS)
            continue
        sub_label, sub_children = _split_node(child)
        if _is_preterminal(sub_children):
            words.append(unescape_word(sub_children[0]))  # type: ignore[arg-type]
            tags.append(sub_label or NO_POS)
        else:
            _collect(strip_function_tags(sub_label), sub_children, words, tags, out, line)
    out[slot] = Constituent(start, len(words), strip_function_tags(label))


def parse_brackets(text: str) -> Iterator[Tuple[Sentence, CTree]]:
    for chunk, line, col in split_trees(text):
        yield tree_from_sexp(parse_sexp(chunk, line, col), line)


def read_brackets(path: str) -> Iterator[Tuple[Sentence, CTree]]:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    yield from parse_brackets(text)


def format_brackets(sentence: Sentence, ctree: CTree) -> str:
    """Canonical single-line form; words without a tag get the `_` preterminal."""
    tags = sentence.pos or (NO_POS,) * sentence.n

    def render(item: Union[Node, int]) -> str:
        if isinstance(item, int):
            return f"({tags[item - 1]} {escape_word(sentence.tokens[item - 1])})"
        return "(" + " ".join([item.label] + [render(c) for c in item.children]) + ")"

    return render(build_nodes(ctree))


def write_brackets(stream: Iterable[Tuple[Sentence, CTree]], path: str) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for sentence, ctree in stream:
            f.write(format_brackets(sentence, ctree) + "\n")
            count += 1
    return count


# l-tree dumps ----------------------------------------------------------

def format_ltree(sentence: Sentence, ltree: LTree) -> str:
    """`(LABEL[h] left right)` with leaves `(LABEL[h] word)`."""
    kids = children_of(ltree)

    def render(span: LexSpan) -> str:
        head = f"{span.label or NO_POS}[{span.h}]"
        if span.i == span.j:
            return f"({head} {escape_word(sentence.tokens[span.i - 1])})"
        left, right = kids[span.span]
        return f"({head} {render(left)} {render(right)})"

    return render(ltree.root)


def write_ltree_brackets(stream: Iterable[Tuple[Sentence, LTree]], path: str) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for sentence, ltree in stream:
            f.write(format_ltree(sentence, ltree) + "\n")
            count += 1
    return count


def _headed(label: str, line: Optional[int]) -> Tuple[Optional[str], int]:
    m = _HEADED_LABEL.match(label)
    if not m:
        raise BracketParseError(f"expected LABEL[h], got {label!r}", line)
    name = m.group(1)
    return (None if name == NO_POS else name), int(m.group(2))


def ltree_from_sexp(node: list, line: Optional[int] = None) -> Tuple[Sentence, LTree]:
    words: List[str] = []
    spans: List[LexSpan] = []

    def walk(raw: list) -> Tuple[int, int]:
        label, children = _split_node(raw)
        name, h = _headed(label, line)
        if _is_preterminal(children):
            words.append(unescape_word(children[0]))  # type: ignore[arg-type]
            w = len(words)
            spans.append(LexSpan(w, w, h, name))
            return w, w
        if len(children) != 2 or not all(isinstance(c, list) for c in children):
            raise BracketParseError(f"l-tree node {label!r} must have two subtrees", line)
        i, _ = walk(children[0])  # type: ignore[arg-type]
        _, j = walk(children[1])  # type: ignore[arg-type]
        spans.append(LexSpan(i, j, h, name))
        return i, j

    walk(node)
    return Sentence(tuple(words)), LTree(tuple(spans))


def read_ltree_brackets(path: str) -> Iterator[Tuple[Sentence, LTree]]:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    for chunk, line, col in split_trees(text):
        yield ltree_from_sexp(parse_sexp(chunk, line, col), line)


__all__ = [
    "escape_word",
    "unescape_word",
    "split_trees",
    "parse_sexp",
    "strip_function_tags",
    "tree_from_sexp",
    "parse_brackets",
    "read_brackets",
    "format_brackets",
    "write_brackets",
    "format_ltree",
    "write_ltree_brackets",
    "ltree_from_sexp",
    "read_ltree_brackets",
]
