"""Paired-rating nonparametric statistics."""

from .ratings import (ATTRIBUTES, Rating, RatingsTable, VERSIONS,
                      aggregate_by_context, load_ratings_csv,
                      parse_ratings_csv)
from .report import (BoxStats, EvaluationReport, TestResult, box_stats,
                     report_to_csv, report_to_markdown, run_evaluation)
from .wilcoxon import (WilcoxonResult, holm_correct, rank_biserial,
                       rank_biserial_matched, wilcoxon_signed_rank)

__all__ = [
    "ATTRIBUTES", "BoxStats", "EvaluationReport", "Rating", "RatingsTable",
    "TestResult", "VERSIONS", "WilcoxonResult", "aggregate_by_context",
    "box_stats", "holm_correct", "load_ratings_csv", "parse_ratings_csv",
    "rank_biserial", "rank_biserial_matched", "report_to_csv",
    "report_to_markdown", "run_evaluation", "wilcoxon_signed_rank",
]
