"""Training loop and prediction tests on small generated corpora."""
import json
import os

import numpy as np
import pytest

from jointparse.core.errors import ConfigError, EmptyCorpusError
from jointparse.decoding import ScoreTables
from jointparse.evaluation import evaluate_corpus
from jointparse.model import ScoringModel, load_checkpoint
from jointparse.training import LossReport, Trainer, build_vocab, predict, predict_many, train
from jointparse.treebank.synthetic import generate_corpus
from jointparse.trees.compat import check_compatibility
from jointparse.trees.types import Sentence, is_intermediate


@pytest.fixture
def corpus():
    return generate_corpus(seed=4, size=6, min_len=2, max_len=6)


def _with_train(config, **updates):
    return config.model_copy(update={"train": config.train.model_copy(update=updates)})


def test_zero_learning_rate_keeps_parameters(corpus, tiny_config):
    config = _with_train(tiny_config, lr=0.0)
    start = ScoringModel(config.model, build_vocab(corpus))
    before = {k: v.copy() for k, v in start.params.items()}
    model, _ = train(corpus, config, model=start)
    for name, p in model.params.items():
        assert np.array_equal(p, before[name])


def test_same_seed_same_parameters(corpus, tiny_config):
    a, reports_a = train(corpus, tiny_config)
    b, reports_b = train(corpus, tiny_config)
    for name in a.params:
        assert np.array_equal(a.params[name], b.params[name])
    assert [r.bracket_loss for r in reports_a] == [r.bracket_loss for r in reports_b]


def test_worker_threads_do_not_change_the_result(corpus, tiny_config):
    a, _ = train(corpus, tiny_config)
    b, _ = train(corpus, _with_train(tiny_config, workers=3))
    for name in a.params:
        assert np.array_equal(a.params[name], b.params[name])


def test_loss_goes_down(corpus, tiny_config):
    config = _with_train(tiny_config, epochs=15, batch_size=2)
    _, reports = train(corpus, config)
    assert len(reports) == 15
    assert all(isinstance(r, LossReport) for r in reports)
    assert min(r.loss_per_token for r in reports[-3:]) < reports[0].loss_per_token


def test_second_order_training_runs(corpus, tiny_config):
    config = _with_train(tiny_config, second_order=True)
    model, reports = train(corpus, config)
    assert len(reports) == 2
    ctree, dtree = predict(model, corpus[0].sentence, second_order=True)
    assert check_compatibility(ctree, dtree).compatible


def test_mtl_objective_runs(corpus, tiny_config):
    config = _with_train(tiny_config, objective="mtl")
    _, reports = train(corpus, config)
    assert reports[0].bracket_loss > 0


def test_predictions_are_compatible(corpus, tiny_config):
    model, _ = train(corpus, tiny_config)
    sentences = [inst.sentence for inst in corpus] + [Sentence(("unseen", "words", "here"))]
    for ctree, dtree in predict_many(model, sentences, workers=2):
        assert check_compatibility(ctree, dtree).compatible
        assert ctree.constituents[0].span == (1, dtree.n)
        assert dtree.rels is not None


def test_predict_many_keeps_input_order(corpus, tiny_config):
    model, _ = train(corpus, tiny_config)
    sentences = [inst.sentence for inst in corpus]
    assert predict_many(model, sentences, workers=3) == [predict(model, s) for s in sentences]


def _model_with_fixed_tables(corpus, tiny_config, monkeypatch):
    """Model whose structure scores favour span (2, 3) and arcs 0->1, 1->2, 1->3."""
    model = ScoringModel(tiny_config.model, build_vocab(corpus))
    sentence = Sentence(("a", "b", "c"))
    _, labels, tape = model.forward(sentence)
    keep = next(k for k, label in enumerate(model.vocab.labels) if not is_intermediate(label))
    labels.con_labels[:] = 0.0
    labels.con_labels[:, :, keep] = 1.0
    tables = ScoreTables.zeros(3)
    tables.span_c[2, 3] = 5.0
    tables.arc_d[0, 1] = tables.arc_d[1, 2] = tables.arc_d[1, 3] = 5.0
    monkeypatch.setattr(model, "forward", lambda s, second_order=False: (tables, labels, tape))
    return model, sentence, model.vocab.labels[keep]


def test_separate_decoder_can_disagree_joint_never_does(corpus, tiny_config, monkeypatch):
    model, sentence, label = _model_with_fixed_tables(corpus, tiny_config, monkeypatch)
    ctree, dtree = predict(model, sentence, decoder="separate")
    assert dtree.heads == (0, 1, 1)
    assert (2, 3) in {c.span for c in ctree.constituents}
    assert ctree.constituents[0].label == label.split("::")[0]
    assert not check_compatibility(ctree, dtree).compatible

    ctree, dtree = predict(model, sentence, decoder="joint")
    assert check_compatibility(ctree, dtree).compatible


def test_separate_decoder_drops_null_spans(corpus, tiny_config, monkeypatch):
    model, sentence, _ = _model_with_fixed_tables(corpus, tiny_config, monkeypatch)
    _, labels, _ = model.forward(sentence)
    labels.con_labels[2, 3, model.vocab.null_id] = 10.0
    labels.con_labels[1, 3, model.vocab.null_id] = 10.0
    ctree, dtree = predict(model, sentence, decoder="separate")
    spans = {c.span for c in ctree.constituents}
    assert (2, 3) not in spans
    # the root never takes NULL
    assert (1, 3) in spans
    assert check_compatibility(ctree, dtree).compatible


def test_separate_predictions_on_trained_model(corpus, tiny_config):
    model, _ = train(corpus, tiny_config)
    sentences = [inst.sentence for inst in corpus]
    results = predict_many(model, sentences, workers=2, decoder="separate")
    for sentence, (ctree, dtree) in zip(sentences, results):
        assert ctree.n == dtree.n == sentence.n
        assert ctree.constituents[0].span == (1, sentence.n)
        assert dtree.rels is not None


def test_unknown_decoder_rejected(corpus, tiny_config):
    model = ScoringModel(tiny_config.model, build_vocab(corpus))
    with pytest.raises(ConfigError):
        predict(model, Sentence(("a", "b")), decoder="greedy")


def test_single_word_sentence(corpus, tiny_config):
    model, _ = train(corpus, tiny_config)
    ctree, dtree = predict(model, Sentence(("dog",)))
    assert dtree.heads == (0,)
    assert {c.span for c in ctree.constituents} == {(1, 1)}


def test_empty_corpus_rejected(tiny_config):
    with pytest.raises(EmptyCorpusError):
        train([], tiny_config)


def test_checkpoint_and_metrics_written(tmp_path, corpus, tiny_config):
    ckpt = str(tmp_path / "m.ckpt")
    metrics = str(tmp_path / "metrics.jsonl")
    model, _ = train(corpus, tiny_config, checkpoint_path=ckpt, metrics_path=metrics)
    loaded, config = load_checkpoint(ckpt)
    assert config.train.epochs == tiny_config.train.epochs
    for name in model.params:
        assert np.array_equal(loaded.params[name], model.params[name])
    with open(metrics, encoding="utf-8") as f:
        records = [json.loads(line) for line in f]
    assert [r["epoch"] for r in records] == [1, 2]
    assert "loss_per_token" in records[0]


def test_dev_evaluation_recorded(tmp_path, corpus, tiny_config):
    dev = generate_corpus(seed=5, size=3, min_len=2, max_len=5)
    ckpt = str(tmp_path / "best.ckpt")
    _, reports = train(corpus, tiny_config, dev=dev, checkpoint_path=ckpt)
    assert set(reports[0].dev) == {"uas", "las", "con_f1", "lcm_both"}
    assert os.path.exists(ckpt)


def test_sentence_step_gradients_cover_every_parameter(corpus, tiny_config):
    model = ScoringModel(tiny_config.model, build_vocab(corpus))
    step = Trainer(model, tiny_config).sentence_step(corpus[0])
    assert set(step.grads) == set(model.params)
    assert step.tokens == corpus[0].sentence.n


@pytest.mark.skipif(not os.getenv("JOINTPARSE_SLOW_TESTS"), reason="set JOINTPARSE_SLOW_TESTS=1 for overfitting runs")
def test_overfits_tiny_corpus(tiny_config):
    corpus = generate_corpus(seed=1, size=32, min_len=3, max_len=8)
    config = _with_train(tiny_config, epochs=200, batch_size=4, second_order=True)
    bigger = config.model.model_copy(update={"word_dim": 32, "ff_dim": 64, "mlp_dim": 32, "span_mlp_dim": 32})
    config = config.model_copy(update={"model": bigger})
    model, _ = train(corpus, config)
    pred = predict_many(model, [inst.sentence for inst in corpus], second_order=True)
    metrics = evaluate_corpus(pred, [(i.sentence, i.ctree, i.dtree) for i in corpus])
    assert metrics.uas >= 99.0
    assert metrics.las >= 98.0
    assert metrics.con_f1 >= 99.0
    assert metrics.lcm_both >= 90.0
