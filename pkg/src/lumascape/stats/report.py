"""Evaluation runner and report rendering.

Context level first averages ratings across participants per context (the
primary analysis); rater level tests the raw pairs as a sensitivity check.
The report carries both rank-biserial variants and labels which one the
headline column uses.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateNoSignal, InputError
from .ratings import ATTRIBUTES, RatingsTable, VERSIONS, aggregate_by_context
from .wilcoxon import (holm_correct, rank_biserial, rank_biserial_matched,
                       wilcoxon_signed_rank)


@dataclass(frozen=True)
class TestResult:
    attribute: str
    w: float | None
    p: float | None
    p_holm: float | None
    r: float | None          # 1 - W / (n(n+1)/2)
    r_matched: float | None  # (T+ - T-) / (T+ + T-)
    n: int
    degenerate: bool = False


@dataclass(frozen=True)
class BoxStats:
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


@dataclass(frozen=True)
class EvaluationReport:
    level: str
    results: tuple[TestResult, ...]
    summary: dict        # (version, attribute) -> {"mean": x, "median": y}
    boxes: dict          # (version, attribute) -> BoxStats


def box_stats(values) -> BoxStats:
    """Quartiles with 1.5*IQR whiskers clipped to observed data."""
    arr = np.asarray(sorted(values), dtype=np.float64)
    q1, med, q3 = np.percentile(arr, [25, 50, 75])
    iqr = q3 - q1
    lo_limit, hi_limit = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = arr[(arr >= lo_limit) & (arr <= hi_limit)]
    outliers = tuple(float(v) for v in arr[(arr < lo_limit) | (arr > hi_limit)])
    return BoxStats(q1=float(q1), median=float(med), q3=float(q3),
                    whisker_low=float(inside.min()),
                    whisker_high=float(inside.max()), outliers=outliers)


def _paired_scores(table: RatingsTable, level: str, attribute: str):
    """(ai, human) arrays paired by context (context level) or by
    participant-context (rater level)."""
    if level == "context":
        means = aggregate_by_context(table)
        contexts = table.contexts()
        ai = [means[(c, "ai", attribute)] for c in contexts]
        human = [means[(c, "human", attribute)] for c in contexts]
        return np.array(ai), np.array(human)
    if level != "rater":
        raise InputError(f"unknown level {level!r}", code="bad-level")
    cell = {(r.participant, r.context, r.version): r.score
            for r in table.rows if r.attribute == attribute}
    ai, human = [], []
    for participant in table.participants():
        for context in table.contexts():
            a = cell.get((participant, context, "ai"))
            h = cell.get((participant, context, "human"))
            if a is not None and h is not None:
                ai.append(a)
                human.append(h)
    if not ai:
        raise InputError(f"no paired {attribute} ratings", code="no-pairs")
    return np.array(ai), np.array(human)


def run_evaluation(table: RatingsTable, level: str = "context") -> EvaluationReport:
    results = []
    for attribute in ATTRIBUTES:
        ai, human = _paired_scores(table, level, attribute)
        try:
            res = wilcoxon_signed_rank(ai, human)
            results.append(TestResult(
                attribute=attribute, w=res.w, p=res.p, p_holm=None,
                r=rank_biserial(res.w, res.n),
                r_matched=rank_biserial_matched(res.t_plus, res.t_minus),
                n=res.n))
        except DegenerateNoSignal:
            results.append(TestResult(attribute=attribute, w=None, p=None,
                                      p_holm=None, r=None, r_matched=None,
                                      n=0, degenerate=True))

    live = [r for r in results if not r.degenerate]
    corrected = holm_correct([r.p for r in live]) if live else []
    holm_by_attr = {r.attribute: c for r, c in zip(live, corrected)}
    results = [
        TestResult(attribute=r.attribute, w=r.w, p=r.p,
                   p_holm=holm_by_attr.get(r.attribute), r=r.r,
                   r_matched=r.r_matched, n=r.n, degenerate=r.degenerate)
        for r in results
    ]

    means = aggregate_by_context(table)
    contexts = table.contexts()
    summary = {}
    for version in VERSIONS:
        for attribute in ATTRIBUTES:
            per_context = [means[(c, version, attribute)] for c in contexts]
            summary[(version, attribute)] = {
                "mean": float(np.mean(per_context)),
                "median": float(np.median(per_context)),
            }

    boxes = {}
    for version in VERSIONS:
        for attribute in ATTRIBUTES:
            raw = [r.score for r in table.rows
                   if r.version == version and r.attribute == attribute]
            boxes[(version, attribute)] = box_stats(raw)

    return EvaluationReport(level=level, results=tuple(results),
                            summary=summary, boxes=boxes)


def report_to_csv(report: EvaluationReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["level", "attribute", "n", "W", "p", "p_holm",
                     "r", "r_matched", "degenerate"])
    for r in report.results:
        writer.writerow([
            report.level, r.attribute, r.n,
            "" if r.w is None else f"{r.w:g}",
            "" if r.p is None else f"{r.p:.6f}",
            "" if r.p_holm is None else f"{r.p_holm:.6f}",
            "" if r.r is None else f"{r.r:.6f}",
            "" if r.r_matched is None else f"{r.r_matched:.6f}",
            "yes" if r.degenerate else "no"])
    return out.getvalue()


def report_to_markdown(report: EvaluationReport) -> str:
    lines = [f"# Paired evaluation ({report.level} level)", ""]
    lines += [
        "Signed-rank tests, two-sided; Holm-Bonferroni across the three "
        "attributes.  The r column is the larger signed-rank sum as a "
        "fraction of the total (1 - W/S); r_matched is the conventional "
        "(T+ - T-)/S form.",
        "",
        "| Attribute | W | p | p_holm | r | r_matched | n |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in report.results:
        if r.degenerate:
            lines.append(f"| {r.attribute} | - | - | - | - | - | 0 (degenerate) |")
        else:
            lines.append(
                f"| {r.attribute} | {r.w:g} | {r.p:.4f} | {r.p_holm:.4f} "
                f"| {r.r:.4f} | {r.r_matched:.4f} | {r.n} |")
    lines += ["", "## Per-version summary (context means)", "",
              "| Version | " + " | ".join(
                  f"{a} mean | {a} median" for a in ATTRIBUTES) + " |",
              "|---|" + "---|" * (2 * len(ATTRIBUTES))]
    for version in VERSIONS:
        cells = []
        for attribute in ATTRIBUTES:
            s = report.summary[(version, attribute)]
            cells.append(f"{s['mean']:.2f} | {s['median']:.2f}")
        lines.append(f"| {version} | " + " | ".join(cells) + " |")
    lines += ["", "## Rating distributions (individual scores)", "",
              "| Version | Attribute | Q1 | Median | Q3 | Whiskers | Outliers |",
              "|---|---|---|---|---|---|---|"]
    for version in VERSIONS:
        for attribute in ATTRIBUTES:
            b = report.boxes[(version, attribute)]
            outliers = ", ".join(f"{o:g}" for o in b.outliers) or "-"
            lines.append(
                f"| {version} | {attribute} | {b.q1:.2f} | {b.median:.2f} "
                f"| {b.q3:.2f} | [{b.whisker_low:.2f}, {b.whisker_high:.2f}] "
                f"| {outliers} |")
    return "\n".join(lines) + "\n"
