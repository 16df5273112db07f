"""Command-line entry points.

    python -m jointparse check-compat TREES.brackets TREES.conllx
    python -m jointparse convert TREES.brackets TREES.conllx OUT.ltree
    python -m jointparse recover OUT.ltree OUT.brackets OUT.conllx
    python -m jointparse train TREES.brackets TREES.conllx --model M.ckpt
    python -m jointparse parse --model M.ckpt INPUT OUT.brackets OUT.conllx
    python -m jointparse eval PRED.brackets PRED.conllx GOLD.brackets GOLD.conllx
    python -m jointparse eval P1.brackets P1.conllx GOLD.brackets GOLD.conllx --also P2.brackets P2.conllx
    python -m jointparse oracle-verify --trials 100

Exit codes: 0 success, 1 failed verification, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from jointparse.core.config import JointParseConfig, load_config
from jointparse.core.errors import JointParseError
from jointparse.core.logging import configure_logging
from jointparse.decoding.oracle import verify_against_oracle
from jointparse.evaluation.buckets import bucketed_metrics, format_buckets
from jointparse.evaluation.metrics import average_metrics, evaluate_corpus, format_metrics
from jointparse.model.checkpoint import load_checkpoint
from jointparse.training.predict import predict_many
from jointparse.training.trainer import train
from jointparse.treebank.audit import filter_compatible, pair_and_audit
from jointparse.treebank.brackets import (
    read_ltree_brackets,
    write_brackets,
    write_ltree_brackets,
)
from jointparse.treebank.conllx import read_conllx, write_conllx
from jointparse.trees.ltree import ltree_to_ctree, ltree_to_dtree
from jointparse.trees.types import Sentence

logger = logging.getLogger("jointparse.cli")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _config(args: argparse.Namespace) -> JointParseConfig:
    overrides: Dict[str, Any] = {
        "seed": getattr(args, "seed", None),
        "lr": getattr(args, "lr", None),
        "epochs": getattr(args, "epochs", None),
        "batch_size": getattr(args, "batch_size", None),
        "workers": getattr(args, "workers", None),
        "objective": getattr(args, "objective", None),
        "trials": getattr(args, "trials", None),
        "log_level": getattr(args, "log_level", None),
        "decoder": getattr(args, "decoder", None),
    }
    if getattr(args, "order", None) is not None:
        overrides["second_order"] = args.order == 2
    if getattr(args, "punct_tags", None) is not None:
        overrides["punct_tags"] = args.punct_tags
    return load_config(getattr(args, "config", None), overrides)


def cmd_check_compat(args: argparse.Namespace) -> int:
    _, stats = pair_and_audit(args.brackets, args.conllx)
    print(f"compatible: {stats.summary()}")
    print(f"labels: {len(stats.labels)} relations: {len(stats.rels)}")
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    instances, _ = pair_and_audit(args.brackets, args.conllx)
    out = []
    for k, inst in enumerate(instances):
        if not inst.compatible:
            logger.info("skipping incompatible sentence %d reason=%s", k, inst.compat.reason)
            continue
        out.append((inst.sentence, inst.ltree))
    written = write_ltree_brackets(out, args.out)
    print(f"wrote {written} l-trees to {args.out} ({len(instances) - written} skipped)")
    return EXIT_OK


def cmd_recover(args: argparse.Namespace) -> int:
    pairs = list(read_ltree_brackets(args.ltrees))
    write_brackets(((s, ltree_to_ctree(t)) for s, t in pairs), args.out_brackets)
    write_conllx(((s, ltree_to_dtree(t)) for s, t in pairs), args.out_conllx)
    print(f"recovered {len(pairs)} sentences")
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    config = _config(args)
    instances, stats = pair_and_audit(args.brackets, args.conllx)
    logger.info("training corpus %s compatible", stats.summary())
    dev = None
    if args.dev_brackets and args.dev_conllx:
        dev, _ = pair_and_audit(args.dev_brackets, args.dev_conllx)
    _, reports = train(
        list(filter_compatible(instances)),
        config,
        dev=dev,
        checkpoint_path=args.model,
        metrics_path=args.metrics,
    )
    last = reports[-1]
    print(f"trained {len(reports)} epochs, final loss per token {last.loss_per_token:.5f}; model at {args.model}")
    return EXIT_OK


def _read_input(path: str, fmt: str) -> List[Sentence]:
    if fmt == "conllx":
        return [s for s, _ in read_conllx(path)]
    with open(path, "r", encoding="utf-8") as f:
        return [Sentence(tuple(line.split())) for line in f if line.strip()]


def cmd_parse(args: argparse.Namespace) -> int:
    model, saved = load_checkpoint(args.model)
    second_order = saved.train.second_order if args.order is None else args.order == 2
    sentences = _read_input(args.input, args.format)
    decoder = _config(args).run.decoder
    results = predict_many(model, sentences, second_order, args.workers or saved.train.workers, decoder)
    write_brackets(((s, c) for s, (c, _) in zip(sentences, results)), args.out_brackets)
    write_conllx(((s, d) for s, (_, d) in zip(sentences, results)), args.out_conllx)
    print(f"parsed {len(sentences)} sentences ({decoder} decoder)")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    config = _config(args)
    gold, _ = pair_and_audit(args.gold_brackets, args.gold_conllx)
    triples = [(g.sentence, g.ctree, g.dtree) for g in gold]
    predictions = []
    for bpath, cpath in [(args.pred_brackets, args.pred_conllx), *(args.also or [])]:
        pred, _ = pair_and_audit(bpath, cpath)
        predictions.append([(p.ctree, p.dtree) for p in pred])
    runs = [evaluate_corpus(pairs, triples, config.run.punct_tags) for pairs in predictions]
    if len(runs) > 1:
        for k, run in enumerate(runs):
            logger.info("run %d uas=%.2f las=%.2f con_f1=%.2f", k, run.uas, run.las, run.con_f1)
        print(f"mean over {len(runs)} runs")
    metrics = average_metrics(runs)
    print(format_metrics(metrics))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            json.dump(metrics.model_dump(), f, indent=2, sort_keys=True)
    if args.buckets:
        # first prediction set only
        print(format_buckets(bucketed_metrics(predictions[0], triples, config.run.punct_tags)))
    return EXIT_OK


def cmd_oracle_verify(args: argparse.Namespace) -> int:
    config = _config(args)
    orders = (False, True) if args.order is None else (args.order == 2,)
    lengths = range(2, args.max_n + 1)
    checked, mismatches = verify_against_oracle(config.run.trials, config.model.seed, lengths, orders)
    for m in mismatches[:10]:
        print(f"mismatch n={m.n} trial={m.trial} second_order={m.second_order} cost={m.cost_augmented}: {m.decoded} != {m.expected}")
    if mismatches:
        print(f"{len(mismatches)} of {checked} cases failed")
        return EXIT_VERIFY_FAILED
    print(f"all passed ({checked} cases)")
    return EXIT_OK


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--log-level", dest="log_level")
    p.add_argument("--seed", type=int)
    p.add_argument("--punct-tags", dest="punct_tags", help="whitespace-separated POS tags treated as punctuation")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jointparse", description="Joint constituency and dependency parsing")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-compat", help="report the share of compatible sentence pairs")
    p.add_argument("brackets")
    p.add_argument("conllx")
    _common(p)
    p.set_defaults(func=cmd_check_compat)

    p = sub.add_parser("convert", help="write head-binarized l-trees for compatible pairs")
    p.add_argument("brackets")
    p.add_argument("conllx")
    p.add_argument("out")
    _common(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("recover", help="turn an l-tree dump back into brackets and CoNLL-X")
    p.add_argument("ltrees")
    p.add_argument("out_brackets")
    p.add_argument("out_conllx")
    _common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("train", help="train a model")
    p.add_argument("brackets")
    p.add_argument("conllx")
    p.add_argument("--model", required=True, help="checkpoint output path")
    p.add_argument("--order", type=int, choices=(1, 2))
    p.add_argument("--lr", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--objective", choices=("joint", "mtl"))
    p.add_argument("--dev-brackets", dest="dev_brackets")
    p.add_argument("--dev-conllx", dest="dev_conllx")
    p.add_argument("--metrics", help="JSON-lines metrics log")
    _common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("parse", help="parse sentences with a trained model")
    p.add_argument("input", help="one tokenized sentence per line, or CoNLL-X with --format conllx")
    p.add_argument("out_brackets")
    p.add_argument("out_conllx")
    p.add_argument("--model", required=True)
    p.add_argument("--order", type=int, choices=(1, 2))
    p.add_argument("--format", choices=("text", "conllx"), default="text")
    p.add_argument("--workers", type=int)
    p.add_argument("--decoder", choices=("joint", "separate"), help="joint chart decoding (default) or independent CKY + Eisner")
    _common(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="score predictions against gold trees")
    p.add_argument("pred_brackets")
    p.add_argument("pred_conllx")
    p.add_argument("gold_brackets")
    p.add_argument("gold_conllx")
    p.add_argument("--json", help="also write the metrics record here")
    p.add_argument("--buckets", action="store_true", help="print bucketed analysis")
    p.add_argument(
        "--also",
        nargs=2,
        action="append",
        metavar=("PRED_BRACKETS", "PRED_CONLLX"),
        help="another prediction pair (e.g. another seed); scores are averaged",
    )
    _common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("oracle-verify", help="check the chart decoder against exhaustive search")
    p.add_argument("--trials", type=int)
    p.add_argument("--order", type=int, choices=(1, 2))
    p.add_argument("--max-n", dest="max_n", type=int, default=6)
    _common(p)
    p.set_defaults(func=cmd_oracle_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except (JointParseError, OSError) as e:
        logger.error("%s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


__all__ = ["main", "build_parser"]
