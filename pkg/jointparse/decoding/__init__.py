"""Chart decoders: joint lexicalized decoding plus first-order baselines."""
from jointparse.decoding.cky import cky
from jointparse.decoding.cost import CostConfig, cost_augment
from jointparse.decoding.eisner import eisner
from jointparse.decoding.eisner_satta import eisner_satta
from jointparse.decoding.oracle import brute_force_argmax, enumerate_ltrees, verify_against_oracle
from jointparse.decoding.parts import Parts, hamming_cost, score_ltree, tree_parts
from jointparse.decoding.tables import ScoreTables

__all__ = [
    "ScoreTables",
    "CostConfig",
    "cost_augment",
    "Parts",
    "tree_parts",
    "score_ltree",
    "hamming_cost",
    "eisner_satta",
    "cky",
    "eisner",
    "enumerate_ltrees",
    "brute_force_argmax",
    "verify_against_oracle",
]
