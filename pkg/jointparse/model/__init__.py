"""Trainable scorer: token encoder, biaffine heads, vocabularies, checkpoints."""
from jointparse.model.checkpoint import load_checkpoint, save_checkpoint
from jointparse.model.scorer import LabelScores, ScoringModel, Tape
from jointparse.model.vocab import Vocab

__all__ = ["ScoringModel", "LabelScores", "Tape", "Vocab", "save_checkpoint", "load_checkpoint"]
