"""Paired perceptual ratings: loading and validation."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from pathlib import Path

from ..errors import InputError

log = logging.getLogger("lumascape.stats")

VERSIONS = ("human", "ai")
ATTRIBUTES = ("emotional", "rhythmic", "chromatic")
SCORE_MIN, SCORE_MAX = 1.0, 10.0


@dataclass(frozen=True)
class Rating:
    participant: str
    context: int
    version: str
    attribute: str
    score: float


@dataclass(frozen=True)
class RatingsTable:
    rows: tuple[Rating, ...]

    def __post_init__(self):
        seen = set()
        for row in self.rows:
            key = (row.participant, row.context, row.version, row.attribute)
            if key in seen:
                raise InputError(f"duplicate rating for {key}", code="duplicate-rating")
            seen.add(key)
            if row.version not in VERSIONS:
                raise InputError(f"unknown version {row.version!r}", code="bad-version")
            if row.attribute not in ATTRIBUTES:
                raise InputError(f"unknown attribute {row.attribute!r}",
                                 code="bad-attribute")
            if not SCORE_MIN <= row.score <= SCORE_MAX:
                raise InputError(f"score {row.score} outside "
                                 f"[{SCORE_MIN:g}, {SCORE_MAX:g}]",
                                 code="score-out-of-scale")

    def participants(self) -> list[str]:
        return sorted({r.participant for r in self.rows})

    def contexts(self) -> list[int]:
        return sorted({r.context for r in self.rows})


def load_ratings_csv(path: str | Path) -> RatingsTable:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"ratings file not found: {path}", code="missing-file")
    return parse_ratings_csv(path.read_text(encoding="utf-8"), source=str(path))


def parse_ratings_csv(text: str, source: str = "<memory>") -> RatingsTable:
    reader = csv.reader(io.StringIO(text))
    rows: list[Rating] = []
    bad_lines: list[str] = []
    header_seen = False
    for lineno, fields in enumerate(reader, 1):
        if not fields or all(not f.strip() for f in fields):
            continue
        if not header_seen:
            header_seen = True
            if [f.strip().lower() for f in fields] == \
                    ["participant", "context", "version", "attribute", "score"]:
                continue  # header row
        if len(fields) != 5:
            bad_lines.append(f"line {lineno}: expected 5 fields, got {len(fields)}")
            continue
        try:
            rows.append(Rating(
                participant=fields[0].strip(),
                context=int(fields[1]),
                version=fields[2].strip(),
                attribute=fields[3].strip(),
                score=float(fields[4])))
        except ValueError as exc:
            bad_lines.append(f"line {lineno}: {exc}")
    if bad_lines:
        raise InputError(f"{source}: malformed rows: " + "; ".join(bad_lines),
                         code="malformed-ratings")
    if not rows:
        raise InputError(f"{source}: no ratings", code="empty-ratings")
    return RatingsTable(rows=tuple(rows))


def aggregate_by_context(table: RatingsTable) -> dict:
    """Mean over participants per (context, version, attribute).

    Missing cells are skipped with a warning; a context missing one version
    entirely cannot be paired and is an error."""
    sums: dict[tuple[int, str, str], list[float]] = {}
    for row in table.rows:
        sums.setdefault((row.context, row.version, row.attribute), []).append(row.score)
    result = {}
    for context in table.contexts():
        for attribute in ATTRIBUTES:
            for version in VERSIONS:
                key = (context, version, attribute)
                scores = sums.get(key)
                if not scores:
                    raise InputError(
                        f"context {context} has no {version}/{attribute} ratings",
                        code="context-missing-version")
                if len(scores) < len(table.participants()):
                    log.warning("context %s %s/%s: %d of %d participants rated",
                                context, version, attribute, len(scores),
                                len(table.participants()))
                result[key] = sum(scores) / len(scores)
    return result
