"""Shared fixtures: the running example sentence and small model configs."""
import pytest

from jointparse.core.config import JointParseConfig, ModelConfig, TrainConfig
from jointparse.treebank.brackets import parse_brackets
from jointparse.trees.types import DTree, LexSpan, LTree, Sentence

LOGIC_BRACKETS = (
    "(S (NP (NN Logic)) (VP (VBZ plays) (NP (DT a) (JJ maximal) (NN role)) (ADVP (RB here))))"
)
LOGIC_HEADS = (2, 0, 5, 5, 2, 2)
LOGIC_RELS = ("nsubj", "root", "det", "amod", "dobj", "advmod")
LOGIC_SPANS = (
    (1, 6, 2, "S"),
    (1, 1, 1, "NP"),
    (2, 6, 2, "VP"),
    (2, 5, 2, "VP*"),
    (2, 2, 2, "VP*"),
    (3, 5, 5, "NP"),
    (3, 3, 3, "NP*"),
    (4, 5, 5, "NP*"),
    (4, 4, 4, "NP*"),
    (5, 5, 5, "NP*"),
    (6, 6, 6, "ADVP"),
)


@pytest.fixture
def logic_pair():
    sentence, ctree = next(parse_brackets(LOGIC_BRACKETS))
    return sentence, ctree, DTree(LOGIC_HEADS, LOGIC_RELS)


@pytest.fixture
def logic_ltree():
    return LTree(tuple(LexSpan(*s) for s in LOGIC_SPANS))


@pytest.fixture
def tiny_config():
    return JointParseConfig(
        model=ModelConfig(word_dim=8, ff_dim=8, mlp_dim=5, span_mlp_dim=4, max_len=32, seed=3),
        train=TrainConfig(epochs=2, batch_size=4, lr=0.05, seed=3),
    )


@pytest.fixture
def sentence6():
    return Sentence(("Logic", "plays", "a", "maximal", "role", "here"))
