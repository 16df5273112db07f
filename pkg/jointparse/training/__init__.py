"""Losses, training loop and two-stage prediction."""
from jointparse.training.losses import TableGrads, hinge_loss, label_loss, mtl_hinge_loss
from jointparse.training.predict import DECODERS, decode_separate, predict, predict_many
from jointparse.training.trainer import LossReport, Trainer, build_vocab, train

__all__ = [
    "TableGrads",
    "hinge_loss",
    "mtl_hinge_loss",
    "label_loss",
    "predict",
    "predict_many",
    "decode_separate",
    "DECODERS",
    "LossReport",
    "Trainer",
    "build_vocab",
    "train",
]
