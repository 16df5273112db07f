"""Parsing metrics and bucketed analysis."""
from jointparse.evaluation.buckets import BucketRow, bucketed_metrics, format_buckets
from jointparse.evaluation.metrics import (
    Metrics,
    attachment_scores,
    average_metrics,
    complete_match,
    constituent_prf,
    evaluate_corpus,
    format_metrics,
)

__all__ = [
    "Metrics",
    "attachment_scores",
    "constituent_prf",
    "complete_match",
    "evaluate_corpus",
    "average_metrics",
    "format_metrics",
    "BucketRow",
    "bucketed_metrics",
    "format_buckets",
]
