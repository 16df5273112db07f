"""Mini-batch training loop.

Per sentence: forward pass, bracket hinge loss (joint or multi-task) and
label cross-entropy, backward pass. Per batch: gradients summed in input
order, divided by the batch's token count, weight decay added, then one SGD
step with momentum. Shuffling uses a seeded generator, so a run is fully
determined by config and corpus.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from jointparse.core.config import JointParseConfig, config_snapshot
from jointparse.core.errors import EmptyCorpusError
from jointparse.core.logging import MetricsWriter
from jointparse.evaluation.metrics import evaluate_corpus
from jointparse.model.checkpoint import save_checkpoint
from jointparse.model.scorer import Params, ScoringModel
from jointparse.model.vocab import Vocab
from jointparse.training.losses import hinge_loss, label_loss, mtl_hinge_loss
from jointparse.training.predict import predict_many
from jointparse.treebank.audit import JointInstance

logger = logging.getLogger(__name__)


class LossReport(BaseModel):
    epoch: int
    bracket_loss: float = Field(..., ge=0.0)
    label_loss: float = Field(..., ge=0.0)
    tokens: int = Field(..., ge=0)
    loss_per_token: float = Field(..., ge=0.0)
    dev: Optional[Dict[str, float]] = None


@dataclass
class _Step:
    bracket: float
    label: float
    tokens: int
    grads: Params


def build_vocab(instances: Sequence[JointInstance]) -> Vocab:
    return Vocab.build(
        (i.sentence for i in instances),
        (i.ltree for i in instances),
        (i.dtree for i in instances),
    )


class Trainer:
    def __init__(self, model: ScoringModel, config: JointParseConfig) -> None:
        self.model = model
        self.config = config
        self.velocity: Params = model.zero_grads()

    def sentence_step(self, inst: JointInstance) -> _Step:
        t = self.config.train
        model = self.model
        tables, labels, tape = model.forward(inst.sentence, t.second_order)
        gold = inst.ltree
        if t.objective == "mtl":
            bracket, tg = mtl_hinge_loss(tables, gold, t.span_cost, t.arc_cost)
        else:
            bracket, tg, _ = hinge_loss(tables, gold, t.second_order, t.span_cost, t.arc_cost)
        label, d_con, d_dep = label_loss(labels, gold, inst.dtree, model.vocab)
        grads = model.backward(
            tape,
            tg.span_c,
            tg.arc_d,
            tg.span2o,
            t.label_weight * d_con,
            t.label_weight * d_dep,
        )
        return _Step(bracket, label, inst.sentence.n, grads)

    def _run_batch(self, batch: Sequence[JointInstance], pool: Optional[ThreadPoolExecutor]) -> List[_Step]:
        if pool is None:
            return [self.sentence_step(inst) for inst in batch]
        return list(pool.map(self.sentence_step, batch))

    def apply(self, steps: Sequence[_Step]) -> None:
        t = self.config.train
        tokens = sum(s.tokens for s in steps)
        params = self.model.params
        for name, p in params.items():
            g = steps[0].grads[name].copy()
            for s in steps[1:]:
                g += s.grads[name]
            g /= tokens
            if t.weight_decay:
                g += t.weight_decay * p
            v = self.velocity[name]
            v *= t.momentum
            v += g
            p -= t.lr * v
        self.model.mark_updated()

    def train_epoch(self, instances: Sequence[JointInstance], rng: np.random.Generator, epoch: int) -> LossReport:
        t = self.config.train
        order = rng.permutation(len(instances))
        bracket = label = 0.0
        tokens = 0
        pool = ThreadPoolExecutor(max_workers=t.workers) if t.workers > 1 else None
        try:
            for start in range(0, len(order), t.batch_size):
                batch = [instances[k] for k in order[start : start + t.batch_size]]
                steps = self._run_batch(batch, pool)
                self.apply(steps)
                bracket += sum(s.bracket for s in steps)
                label += sum(s.label for s in steps)
                tokens += sum(s.tokens for s in steps)
        finally:
            if pool is not None:
                pool.shutdown()
        return LossReport(
            epoch=epoch,
            bracket_loss=bracket,
            label_loss=label,
            tokens=tokens,
            loss_per_token=(bracket + t.label_weight * label) / max(tokens, 1),
        )


def _dev_score(metrics: Dict[str, float]) -> float:
    return metrics["con_f1"] + metrics["las"]


def train(
    instances: Sequence[JointInstance],
    config: JointParseConfig,
    dev: Optional[Sequence[JointInstance]] = None,
    checkpoint_path: Optional[str] = None,
    metrics_path: Optional[str] = None,
    model: Optional[ScoringModel] = None,
) -> Tuple[ScoringModel, List[LossReport]]:
    """Train on compatible instances; returns the final model and one report per epoch.

    With a dev set and a checkpoint path, the checkpoint keeps the best epoch
    by dev (constituent F1 + LAS); otherwise the final parameters are saved.
    """
    instances = list(instances)
    if not instances:
        raise EmptyCorpusError("no training instances")
    if model is None:
        model = ScoringModel(config.model, build_vocab(instances))
    t = config.train
    logger.info("training sentences=%d config=%s", len(instances), config_snapshot(config))
    trainer = Trainer(model, config)
    rng = np.random.default_rng(t.seed)
    reports: List[LossReport] = []
    best: Optional[float] = None
    with MetricsWriter(metrics_path) as sink:
        for epoch in range(1, t.epochs + 1):
            report = trainer.train_epoch(instances, rng, epoch)
            if dev:
                pred = predict_many(model, [d.sentence for d in dev], t.second_order, t.workers)
                m = evaluate_corpus(pred, [(d.sentence, d.ctree, d.dtree) for d in dev], config.run.punct_tags)
                report.dev = {"uas": m.uas, "las": m.las, "con_f1": m.con_f1, "lcm_both": m.lcm_both}
                score = _dev_score(report.dev)
                if checkpoint_path and (best is None or score > best):
                    best = score
                    save_checkpoint(checkpoint_path, model, config)
            reports.append(report)
            sink.write(report.model_dump())
            logger.info(
                "epoch=%d bracket=%.4f label=%.4f per_token=%.5f dev=%s",
                epoch,
                report.bracket_loss,
                report.label_loss,
                report.loss_per_token,
                report.dev,
            )
    if checkpoint_path and not dev:
        save_checkpoint(checkpoint_path, model, config)
    return model, reports


__all__ = ["LossReport", "Trainer", "train", "build_vocab"]
