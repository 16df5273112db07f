"""Chart decoder tests: exhaustive-search agreement, cost augmentation, degenerate cases."""
import os
import time

import numpy as np
import pytest

from jointparse.core.errors import EmptySentenceError, InvalidTreeError, TooLargeError
from jointparse.decoding import (
    CostConfig,
    ScoreTables,
    brute_force_argmax,
    cky,
    cost_augment,
    eisner,
    eisner_satta,
    enumerate_ltrees,
    hamming_cost,
    score_ltree,
    tree_parts,
    verify_against_oracle,
)
from jointparse.decoding.tables import arc_mask, span_mask
from jointparse.training.predict import decode_separate
from jointparse.trees.compat import check_compatibility
from jointparse.trees.ltree import ltree_to_dtree, validate_ltree
from jointparse.trees.types import CompatReason, Constituent, CTree, DTree


def _indicator_tables(ltree, second_order=False):
    n = ltree.n
    tables = ScoreTables.zeros(n, second_order)
    parts = tree_parts(ltree)
    for i, j in parts.spans:
        tables.span_c[i, j] = 1.0
    for h, m in parts.arcs:
        tables.arc_d[h, m] = 1.0
    if second_order:
        for i, j, h in parts.headed + parts.hooked:
            tables.span2o[i, j, h] = 1.0
    return tables


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 8), (4, 40), (5, 224), (6, 1344)])
def test_enumeration_counts(n, count):
    trees = list(enumerate_ltrees(n))
    assert len(trees) == count
    assert len({t.triples() for t in trees}) == count


def test_enumeration_limits():
    with pytest.raises(EmptySentenceError):
        list(enumerate_ltrees(0))
    with pytest.raises(TooLargeError):
        list(enumerate_ltrees(9))


def test_enumerated_trees_are_valid():
    for tree in enumerate_ltrees(4):
        validate_ltree(tree)


def test_decoder_matches_exhaustive_search():
    rng = np.random.default_rng(11)
    for n in range(1, 7):
        for second_order in (False, True):
            for _ in range(5):
                scores = ScoreTables.random(n, rng, second_order=second_order)
                tree, score = eisner_satta(scores, second_order)
                want_tree, want = brute_force_argmax(scores, second_order)
                assert score == pytest.approx(want, rel=1e-9, abs=1e-12)
                assert tree.triples() == want_tree.triples()
                validate_ltree(tree)


def test_cost_augmented_decoder_matches_exhaustive_search():
    rng = np.random.default_rng(12)
    for n in range(2, 6):
        trees = list(enumerate_ltrees(n))
        for second_order in (False, True):
            scores = ScoreTables.random(n, rng, second_order=second_order)
            cost = CostConfig(trees[int(rng.integers(len(trees)))], span_cost=1.0, arc_cost=0.5)
            _, score = eisner_satta(scores, second_order, cost)
            _, want = brute_force_argmax(scores, second_order, cost)
            assert score == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_verify_against_oracle_reports_no_mismatch():
    checked, mismatches = verify_against_oracle(trials=3, seed=5, lengths=(1, 2, 3, 4, 5))
    assert checked == 3 * 5 * 2 * 2
    assert mismatches == []


def test_full_oracle_sweep_with_defaults():
    checked, mismatches = verify_against_oracle()
    assert checked == 100 * 5 * 2 * 2
    assert mismatches == []


def test_indicator_scores_recover_gold(logic_ltree):
    gold = logic_ltree.unlabeled()
    tree, score = eisner_satta(_indicator_tables(gold))
    assert score == 17.0
    assert tree == gold


def test_indicator_scores_recover_gold_second_order(logic_ltree):
    gold = logic_ltree.unlabeled()
    tree, score = eisner_satta(_indicator_tables(gold, True), second_order=True)
    # 11 spans + 6 arcs + 11 headed + 6 hooked
    assert score == 34.0
    assert tree == gold
    assert ltree_to_dtree(tree).heads == (2, 0, 5, 5, 2, 2)


def test_decoded_score_equals_tree_score():
    rng = np.random.default_rng(3)
    for n in (1, 4, 9):
        for second_order in (False, True):
            scores = ScoreTables.random(n, rng, second_order=second_order)
            tree, score = eisner_satta(scores, second_order)
            assert score_ltree(scores, tree, second_order) == pytest.approx(score, rel=1e-12)


def test_cost_augmented_score_equals_tree_score_plus_hamming(logic_ltree):
    rng = np.random.default_rng(4)
    gold = logic_ltree.unlabeled()
    scores = ScoreTables.random(6, rng, second_order=True)
    cost = CostConfig(gold, span_cost=2.0, arc_cost=1.0)
    tree, score = eisner_satta(scores, True, cost)
    expected = score_ltree(scores, tree, True) + hamming_cost(tree, gold, 2.0, 1.0)
    assert score == pytest.approx(expected, rel=1e-12)
    assert score_ltree(scores, tree, True, cost) == pytest.approx(score, rel=1e-12)


def test_gold_tree_has_zero_hamming_cost(logic_ltree):
    gold = logic_ltree.unlabeled()
    assert hamming_cost(gold, gold) == 0.0
    scores = ScoreTables.random(6, np.random.default_rng(8))
    augmented = cost_augment(scores, CostConfig(gold))
    assert score_ltree(augmented, gold) == pytest.approx(score_ltree(scores, gold), rel=1e-12)


def test_cost_augment_only_touches_non_gold_cells(logic_ltree):
    gold = logic_ltree.unlabeled()
    scores = ScoreTables.zeros(6)
    augmented = cost_augment(scores, CostConfig(gold, span_cost=1.0, arc_cost=3.0))
    parts = tree_parts(gold)
    for i, j in parts.spans:
        assert augmented.span_c[i, j] == 0.0
    for h, m in parts.arcs:
        assert augmented.arc_d[h, m] == 0.0
    assert augmented.span_c.sum() == span_mask(6).sum() - len(parts.spans)
    assert augmented.arc_d.sum() == 3.0 * (arc_mask(6).sum() - len(parts.arcs))
    # input tables are left alone
    assert scores.span_c.sum() == 0.0


def test_cost_augment_rejects_length_mismatch(logic_ltree):
    with pytest.raises(InvalidTreeError):
        cost_augment(ScoreTables.zeros(4), CostConfig(logic_ltree))


def test_negative_cost_rejected(logic_ltree):
    with pytest.raises(InvalidTreeError):
        CostConfig(logic_ltree, span_cost=-1.0)


@pytest.mark.parametrize("n", [1, 2, 5, 12, 20])
def test_no_arc_scores_reduce_to_cky(n):
    rng = np.random.default_rng(n)
    scores = ScoreTables.random(n, rng, second_order=False)
    scores.arc_d[:] = 0.0
    tree, score = eisner_satta(scores)
    spans, want = cky(scores.span_c)
    assert score == pytest.approx(want, rel=1e-12)
    assert sorted(s.span for s in tree.spans) == sorted(spans)


@pytest.mark.parametrize("n", [1, 2, 5, 12, 20])
def test_no_span_scores_reduce_to_eisner(n):
    rng = np.random.default_rng(100 + n)
    scores = ScoreTables.random(n, rng, second_order=False)
    scores.span_c[:] = 0.0
    tree, score = eisner_satta(scores)
    dtree, want = eisner(scores.arc_d)
    assert isinstance(dtree, DTree)
    assert score == pytest.approx(want, rel=1e-12)
    assert ltree_to_dtree(tree).heads == dtree.heads


def _disagreeing_tables():
    # span (2, 3) wants one head inside, the arcs give it two
    scores = ScoreTables.zeros(3)
    scores.span_c[2, 3] = 5.0
    scores.arc_d[0, 1] = scores.arc_d[1, 2] = scores.arc_d[1, 3] = 5.0
    return scores


def test_separate_decoding_can_be_incompatible():
    spans, dtree = decode_separate(_disagreeing_tables())
    assert spans == ((1, 3), (1, 1), (2, 3), (2, 2), (3, 3))
    assert dtree.heads == (0, 1, 1)
    report = check_compatibility(CTree(tuple(Constituent(i, j, "X") for i, j in spans)), dtree)
    assert not report.compatible
    assert report.reason is CompatReason.MULTI_HEAD


def test_joint_decoding_stays_compatible_where_separate_does_not():
    tree, score = eisner_satta(_disagreeing_tables())
    ctree = CTree(tuple(Constituent(s.i, s.j, "X") for s in tree.spans))
    assert check_compatibility(ctree, ltree_to_dtree(tree)).compatible
    # one of the three bonuses is lost
    assert score == pytest.approx(15.0)


def test_constant_shift_keeps_argmax():
    rng = np.random.default_rng(21)
    n = 7
    scores = ScoreTables.random(n, rng, second_order=False)
    tree, score = eisner_satta(scores)
    shifted = scores.copy()
    shifted.span_c = shifted.span_c + np.where(span_mask(n), 2.5, 0.0)
    shifted.arc_d = shifted.arc_d + np.where(arc_mask(n), -1.5, 0.0)
    tree2, score2 = eisner_satta(shifted)
    assert tree2 == tree
    assert score2 == pytest.approx(score + (2 * n - 1) * 2.5 - n * 1.5, rel=1e-12)


def test_cky_cost_matches_exhaustive_search(logic_ltree):
    gold = logic_ltree.unlabeled()
    rng = np.random.default_rng(31)
    scores = ScoreTables.random(6, rng, second_order=False)
    scores.arc_d[:] = 0.0
    parts = tree_parts(gold)
    _, got = cky(scores.span_c, parts.spans, span_cost=1.0)
    _, want = brute_force_argmax(scores, cost=CostConfig(gold, span_cost=1.0, arc_cost=0.0))
    assert got == pytest.approx(want, rel=1e-12)


def test_eisner_cost_matches_exhaustive_search(logic_ltree):
    gold = logic_ltree.unlabeled()
    rng = np.random.default_rng(32)
    scores = ScoreTables.random(6, rng, second_order=False)
    scores.span_c[:] = 0.0
    heads = ltree_to_dtree(gold).heads
    _, got = eisner(scores.arc_d, heads, arc_cost=1.0)
    _, want = brute_force_argmax(scores, cost=CostConfig(gold, span_cost=0.0, arc_cost=1.0))
    assert got == pytest.approx(want, rel=1e-12)


def test_cky_returns_preorder_binary_tree():
    spans, _ = cky(ScoreTables.random(5, np.random.default_rng(2)).span_c)
    assert spans[0] == (1, 5)
    assert len(spans) == 9
    assert list(spans) == sorted(spans, key=lambda s: (s[0], -s[1]))


def test_single_word_decodes_trivially():
    scores = ScoreTables.random(1, np.random.default_rng(0), second_order=True)
    tree, score = eisner_satta(scores, second_order=True)
    assert [s.unlabeled() for s in tree.spans] == [(1, 1, 1)]
    expected = scores.span_c[1, 1] + scores.arc_d[0, 1] + scores.span2o[1, 1, 1] + scores.span2o[1, 1, 0]
    assert score == pytest.approx(expected, rel=1e-12)


def test_decoder_input_errors():
    with pytest.raises(EmptySentenceError):
        eisner_satta(ScoreTables.zeros(0))
    with pytest.raises(InvalidTreeError):
        eisner_satta(ScoreTables.zeros(3), second_order=True)


def test_score_tables_validation():
    with pytest.raises(InvalidTreeError):
        ScoreTables(3, np.zeros((3, 3)), np.zeros((4, 4)))
    bad = np.zeros((4, 4))
    bad[1, 2] = np.nan
    with pytest.raises(InvalidTreeError):
        ScoreTables(3, bad, np.zeros((4, 4)))
    # unused cells may hold anything
    ignored = np.zeros((4, 4))
    ignored[2, 1] = np.inf
    ScoreTables(3, ignored, np.zeros((4, 4)))


def test_tree_parts_counts(logic_ltree):
    parts = tree_parts(logic_ltree)
    assert len(parts.spans) == 11
    assert len(parts.headed) == 11
    assert len(parts.hooked) == 6
    assert [m for _, m in parts.arcs] == [1, 2, 3, 4, 5, 6]
    assert (1, 6, 0) in parts.hooked
    assert (3, 5, 2) in parts.hooked


def _median_decode_time(n, second_order, runs=10):
    rng = np.random.default_rng(n)
    times = []
    for _ in range(runs):
        scores = ScoreTables.random(n, rng, second_order=second_order)
        start = time.perf_counter()
        eisner_satta(scores, second_order)
        times.append(time.perf_counter() - start)
    return float(np.median(times))


@pytest.mark.skipif(not os.getenv("JOINTPARSE_SLOW_TESTS"), reason="set JOINTPARSE_SLOW_TESTS=1 for timing runs")
@pytest.mark.parametrize("second_order", [False, True])
def test_doubling_sentence_length_costs_at_most_24x_decode_time(second_order):
    eisner_satta(ScoreTables.random(5, np.random.default_rng(0), second_order=second_order), second_order)
    ratio = _median_decode_time(40, second_order) / _median_decode_time(20, second_order)
    assert ratio <= 24.0
