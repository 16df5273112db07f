"""Loss tests: structured hinge, multi-task hinge and label cross-entropy."""
import math

import numpy as np
import pytest

from jointparse.core.errors import UnknownLabelError
from jointparse.decoding import CostConfig, ScoreTables, brute_force_argmax, cky, eisner, tree_parts
from jointparse.model.scorer import LabelScores
from jointparse.model.vocab import Vocab
from jointparse.training.losses import hinge_loss, label_loss, mtl_hinge_loss
from jointparse.trees.ltree import ltree_to_dtree
from jointparse.trees.types import NULL_LABEL, DTree, LexSpan, LTree


def _gold_dominant(gold, second_order):
    tables = ScoreTables.zeros(gold.n, second_order)
    parts = tree_parts(gold)
    for i, j in parts.spans:
        tables.span_c[i, j] = 100.0
    for h, m in parts.arcs:
        tables.arc_d[h, m] = 100.0
    return tables


@pytest.mark.parametrize("second_order", [False, True])
def test_hinge_zero_when_gold_dominates(logic_ltree, second_order):
    loss, grads, best = hinge_loss(_gold_dominant(logic_ltree, second_order), logic_ltree, second_order)
    assert loss == 0.0
    assert best == logic_ltree.unlabeled()
    assert not grads.span_c.any()
    assert not grads.arc_d.any()


def test_hinge_on_zero_tables_is_max_cost(logic_ltree):
    scores = ScoreTables.zeros(6)
    loss, grads, best = hinge_loss(scores, logic_ltree)
    _, want = brute_force_argmax(scores, cost=CostConfig(logic_ltree.unlabeled()))
    assert loss == pytest.approx(want)
    assert loss > 0
    # both trees have 2n-1 spans and n arcs
    assert grads.span_c.sum() == 0.0
    assert grads.arc_d.sum() == 0.0
    for i, j in tree_parts(best).spans:
        if (i, j) not in tree_parts(logic_ltree).spans:
            assert grads.span_c[i, j] == 1.0


def test_hinge_respects_cost_weights(logic_ltree):
    scores = ScoreTables.zeros(6)
    loss_1, _, _ = hinge_loss(scores, logic_ltree, span_cost=1.0, arc_cost=1.0)
    loss_2, _, _ = hinge_loss(scores, logic_ltree, span_cost=2.0, arc_cost=2.0)
    assert loss_2 == pytest.approx(2 * loss_1)


@pytest.mark.parametrize("second_order", [False, True])
def test_hinge_subgradient_matches_finite_differences(logic_ltree, second_order):
    rng = np.random.default_rng(9)
    scores = ScoreTables.random(6, rng, second_order=second_order)
    loss, grads, _ = hinge_loss(scores, logic_ltree, second_order)
    assert loss > 0
    eps = 1e-6
    cells = [("span_c", (1, 3)), ("span_c", (4, 5)), ("arc_d", (2, 1)), ("arc_d", (0, 2)), ("arc_d", (3, 4))]
    if second_order:
        cells += [("span2o", (1, 6, 0)), ("span2o", (2, 6, 2)), ("span2o", (3, 5, 2))]
    for field, idx in cells:
        plus, minus = scores.copy(), scores.copy()
        getattr(plus, field)[idx] += eps
        getattr(minus, field)[idx] -= eps
        numeric = (hinge_loss(plus, logic_ltree, second_order)[0] - hinge_loss(minus, logic_ltree, second_order)[0]) / (
            2 * eps
        )
        assert getattr(grads, field)[idx] == pytest.approx(numeric, abs=1e-6)


def test_mtl_hinge_matches_separate_decoders(logic_ltree):
    rng = np.random.default_rng(5)
    scores = ScoreTables.random(6, rng, second_order=False)
    parts = tree_parts(logic_ltree)
    heads = ltree_to_dtree(logic_ltree).heads
    _, aug_c = cky(scores.span_c, parts.spans)
    _, aug_d = eisner(scores.arc_d, heads)
    gold_c = sum(scores.span_c[i, j] for i, j in parts.spans)
    gold_d = sum(scores.arc_d[h, m] for h, m in parts.arcs)
    loss, grads = mtl_hinge_loss(scores, logic_ltree)
    assert loss == pytest.approx(max(0.0, aug_c - gold_c) + max(0.0, aug_d - gold_d))
    assert grads.span2o is None


def test_mtl_hinge_zero_when_gold_dominates(logic_ltree):
    loss, grads = mtl_hinge_loss(_gold_dominant(logic_ltree, False), logic_ltree)
    assert loss == 0.0
    assert not grads.span_c.any()
    assert not grads.arc_d.any()


def _one_word_vocab():
    return Vocab(["<unk>", "<bos>", "<eos>", "w"], [NULL_LABEL, "NP", "S", "VP"], ["root"])


def test_label_loss_with_uniform_scores():
    vocab = _one_word_vocab()
    gold = LTree((LexSpan(1, 1, 1, "S"),))
    labels = LabelScores(np.zeros((2, 2, 4)), np.zeros((2, 2, 1)))
    loss, d_con, d_dep = label_loss(labels, gold, DTree((0,), ("root",)), vocab)
    assert loss == pytest.approx(math.log(4))
    assert d_con[1, 1].tolist() == pytest.approx([0.25, 0.25, -0.75, 0.25])
    assert not d_dep.any()


def test_label_loss_targets_null_for_intermediate_spans(logic_ltree, logic_pair):
    sentence, _, dtree = logic_pair
    vocab = Vocab.build([sentence], [logic_ltree], [dtree])
    n = 6
    labels = LabelScores(np.zeros((n + 1, n + 1, len(vocab.labels))), np.zeros((n + 1, n + 1, len(vocab.rels))))
    loss, d_con, d_dep = label_loss(labels, logic_ltree, dtree, vocab)
    assert loss == pytest.approx(11 * math.log(5) + 6 * math.log(6))
    # (2, 5) is VP*, so its gradient pushes towards NULL
    assert d_con[2, 5, vocab.null_id] < 0
    assert d_con[1, 6, vocab.label_id("S")] < 0
    assert d_dep[2, 1, vocab.rel_id("nsubj")] < 0
    assert not d_con[1, 2].any()


def test_label_loss_gradient_matches_finite_differences():
    vocab = _one_word_vocab()
    gold = LTree((LexSpan(1, 2, 2, "VP"), LexSpan(1, 1, 1, "NP"), LexSpan(2, 2, 2, "VP*")))
    dtree = DTree((2, 0), ("root", "root"))
    rng = np.random.default_rng(2)
    labels = LabelScores(rng.standard_normal((3, 3, 4)), rng.standard_normal((3, 3, 1)))
    _, d_con, _ = label_loss(labels, gold, dtree, vocab)
    eps = 1e-6
    for idx in [(1, 2, 0), (1, 2, 3), (1, 1, 1), (2, 2, 0)]:
        plus = LabelScores(labels.con_labels.copy(), labels.dep_rels)
        minus = LabelScores(labels.con_labels.copy(), labels.dep_rels)
        plus.con_labels[idx] += eps
        minus.con_labels[idx] -= eps
        numeric = (label_loss(plus, gold, dtree, vocab)[0] - label_loss(minus, gold, dtree, vocab)[0]) / (2 * eps)
        assert d_con[idx] == pytest.approx(numeric, abs=1e-6)


def test_label_loss_unknown_label():
    vocab = _one_word_vocab()
    gold = LTree((LexSpan(1, 1, 1, "ADJP"),))
    labels = LabelScores(np.zeros((2, 2, 4)), np.zeros((2, 2, 1)))
    with pytest.raises(UnknownLabelError):
        label_loss(labels, gold, DTree((0,), ("root",)), vocab)
