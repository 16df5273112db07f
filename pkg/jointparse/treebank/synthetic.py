"""Random compatible (c-tree, d-tree) pairs and the bundled toy treebank.

The d-tree is drawn first (random projective tree); the c-tree is then
derived from it: every head word gets a constituent over its full yield and,
at random, smaller constituents that add its dependents one at a time. Such
spans always have exactly one externally attached word, so the pair is
compatible by construction. Words without dependents are left bare or get a
single-word constituent; random unary chains stack two labels on a span.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from jointparse.treebank.audit import JointInstance
from jointparse.treebank.brackets import parse_brackets
from jointparse.trees.types import Constituent, CTree, DTree, Sentence

logger = logging.getLogger(__name__)

PHRASE_LABELS = ("S", "NP", "VP", "PP", "ADJP", "ADVP", "SBAR")
RELATIONS = ("nsubj", "obj", "det", "amod", "advmod", "case", "nmod", "conj", "punct")
LEXICON: Tuple[Tuple[str, str], ...] = (
    ("the", "DT"), ("a", "DT"), ("dog", "NN"), ("cat", "NN"), ("park", "NN"),
    ("telescope", "NN"), ("man", "NN"), ("house", "NN"), ("saw", "VBD"),
    ("runs", "VBZ"), ("likes", "VBZ"), ("old", "JJ"), ("big", "JJ"),
    ("quickly", "RB"), ("here", "RB"), ("with", "IN"), ("in", "IN"),
    ("and", "CC"), (",", ","), (".", "."),
)
TOY_SEED = 20
TOY_SIZE = 18


def random_projective_heads(rng: np.random.Generator, n: int) -> List[int]:
    heads = [0] * (n + 1)

    def blocks(lo: int, hi: int) -> List[Tuple[int, int]]:
        if lo > hi:
            return []
        out, start = [], lo
        for w in range(lo, hi):
            if rng.random() < 0.5:
                out.append((start, w))
                start = w + 1
        out.append((start, hi))
        return out

    def build(lo: int, hi: int, head: int) -> None:
        r = int(rng.integers(lo, hi + 1))
        heads[r] = head
        for a, b in blocks(lo, r - 1) + blocks(r + 1, hi):
            build(a, b, r)

    build(1, n, 0)
    return heads[1:]


def _yields(dtree: DTree) -> Tuple[Dict[int, int], Dict[int, int]]:
    children = dtree.children()
    lo: Dict[int, int] = {}
    hi: Dict[int, int] = {}

    def visit(h: int) -> None:
        lo[h] = hi[h] = h
        for c in children[h]:
            visit(c)
            lo[h] = min(lo[h], lo[c])
            hi[h] = max(hi[h], hi[c])

    visit(dtree.root())
    return lo, hi


def derive_ctree(
    rng: np.random.Generator,
    dtree: DTree,
    layer_prob: float = 0.3,
    leaf_prob: float = 0.4,
    unary_prob: float = 0.15,
) -> CTree:
    """A random n-ary c-tree compatible with the given projective d-tree."""
    children = dtree.children()
    lo, hi = _yields(dtree)
    out: List[Constituent] = []

    def emit(i: int, j: int) -> None:
        labels = list(rng.choice(PHRASE_LABELS, size=2, replace=False))
        if rng.random() < unary_prob:
            out.append(Constituent(i, j, str(labels[0])))
        out.append(Constituent(i, j, str(labels[1])))

    for h in range(1, dtree.n + 1):
        deps = children[h]
        if not deps:
            if (lo[h], hi[h]) == (1, dtree.n) or rng.random() < leaf_prob:
                emit(h, h)
            continue
        left = sorted((d for d in deps if d < h), reverse=True)
        right = sorted(d for d in deps if d > h)
        a = b = h
        if rng.random() < layer_prob / 2:
            emit(h, h)
        li = ri = 0
        while li < len(left) or ri < len(right):
            if ri >= len(right) or (li < len(left) and rng.random() < 0.5):
                a = lo[left[li]]
                li += 1
            else:
                b = hi[right[ri]]
                ri += 1
            done = li == len(left) and ri == len(right)
            if done or rng.random() < layer_prob:
                emit(a, b)
    return CTree(tuple(out))


def generate_compatible_pair(rng: np.random.Generator, n: int) -> Tuple[Sentence, CTree, DTree]:
    heads = random_projective_heads(rng, n)
    rels = tuple("root" if h == 0 else str(rng.choice(RELATIONS)) for h in heads)
    dtree = DTree(tuple(heads), rels)
    picks = [LEXICON[int(k)] for k in rng.integers(0, len(LEXICON), size=n)]
    sentence = Sentence(tuple(w for w, _ in picks), tuple(t for _, t in picks))
    return sentence, derive_ctree(rng, dtree), dtree


def generate_corpus(seed: int, size: int, min_len: int = 1, max_len: int = 10) -> List[JointInstance]:
    rng = np.random.default_rng(seed)
    corpus = []
    for _ in range(size):
        n = int(rng.integers(min_len, max_len + 1))
        corpus.append(JointInstance(*generate_compatible_pair(rng, n)))
    return corpus


# Two pairs that no l-tree can encode: a non-projective arc that leaves the VP
# with two external words, and an NP whose words both attach outside it.
_INCOMPATIBLE: Sequence[Tuple[str, Tuple[int, ...], Tuple[str, ...]]] = (
    (
        "(S (NP (DT A) (NN hearing)) (VP (VBZ is) (VP (VBN scheduled) (NP (NN tomorrow))"
        " (PP (IN on) (NP (DT this) (NN issue))))))",
        (2, 4, 4, 0, 4, 2, 8, 6),
        ("det", "nsubj", "aux", "root", "obl", "nmod", "det", "pobj"),
    ),
    (
        "(S (NP (_ a) (_ b)) (_ c))",
        (3, 3, 0),
        ("nmod", "nsubj", "root"),
    ),
)
_INCOMPATIBLE_AT = (5, 13)


def incompatible_examples() -> List[JointInstance]:
    out = []
    for text, heads, rels in _INCOMPATIBLE:
        sentence, ctree = next(parse_brackets(text))
        out.append(JointInstance(sentence, ctree, DTree(heads, rels)))
    return out


def toy_corpus(seed: Optional[int] = None) -> List[JointInstance]:
    """20 sentences: 18 generated compatible pairs and 2 incompatible ones."""
    corpus = generate_corpus(TOY_SEED if seed is None else seed, TOY_SIZE, min_len=2, max_len=8)
    for at, inst in zip(_INCOMPATIBLE_AT, incompatible_examples()):
        corpus.insert(at, inst)
    return corpus


__all__ = [
    "random_projective_heads",
    "derive_ctree",
    "generate_compatible_pair",
    "generate_corpus",
    "incompatible_examples",
    "toy_corpus",
]
