#!/usr/bin/env python
"""Write the bundled toy treebank to disk.
Usage:
  python scripts/make_toy_corpus.py --out-dir data/toy
  python scripts/make_toy_corpus.py --out-dir data/toy --seed 11 --ltrees

Produces toy.brackets and toy.conllx (20 aligned sentences, two of them
deliberately incompatible). With --ltrees also dumps the compatible ones as
toy.ltree.
"""
from __future__ import annotations

import argparse
import logging
import os

from jointparse.core.logging import configure_logging
from jointparse.treebank import filter_compatible, toy_corpus, write_brackets, write_conllx, write_ltree_brackets

log = logging.getLogger("jointparse.scripts.toy")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default=".")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--ltrees", action="store_true")
    ap.add_argument("--log-level")
    args = ap.parse_args()
    configure_logging(args.log_level)

    os.makedirs(args.out_dir, exist_ok=True)
    corpus = toy_corpus(args.seed)
    bpath = os.path.join(args.out_dir, "toy.brackets")
    cpath = os.path.join(args.out_dir, "toy.conllx")
    n = write_brackets(((i.sentence, i.ctree) for i in corpus), bpath)
    write_conllx(((i.sentence, i.dtree) for i in corpus), cpath)
    log.info("wrote %d sentences to %s and %s", n, bpath, cpath)
    if args.ltrees:
        lpath = os.path.join(args.out_dir, "toy.ltree")
        k = write_ltree_brackets(((i.sentence, i.ltree) for i in filter_compatible(corpus)), lpath)
        log.info("wrote %d l-trees to %s", k, lpath)
    print(f"Toy sentences: {n}")


if __name__ == "__main__":
    main()
