"""Treebank readers/writers, pairing, compatibility audit and synthetic data."""
from jointparse.treebank.audit import (
    CorpusStats,
    JointInstance,
    build_vocab_stats,
    corpus_stats,
    filter_compatible,
    pair_and_audit,
    pair_instances,
)
from jointparse.treebank.brackets import (
    format_brackets,
    format_ltree,
    parse_brackets,
    read_brackets,
    read_ltree_brackets,
    write_brackets,
    write_ltree_brackets,
)
from jointparse.treebank.conllx import format_conllx, parse_conllx, read_conllx, write_conllx
from jointparse.treebank.synthetic import generate_corpus, incompatible_examples, toy_corpus

__all__ = [
    "JointInstance",
    "CorpusStats",
    "build_vocab_stats",
    "corpus_stats",
    "pair_instances",
    "pair_and_audit",
    "filter_compatible",
    "parse_brackets",
    "read_brackets",
    "write_brackets",
    "format_brackets",
    "format_ltree",
    "write_ltree_brackets",
    "read_ltree_brackets",
    "parse_conllx",
    "read_conllx",
    "write_conllx",
    "format_conllx",
    "generate_corpus",
    "incompatible_examples",
    "toy_corpus",
]
