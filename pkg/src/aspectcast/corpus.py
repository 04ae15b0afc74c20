"""Data model and ingestion for reviews, calendar quarters, and revenue series."""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field

__all__ = [
    "Quarter",
    "Review",
    "RevenueSeries",
    "CorpusError",
    "parse_reviews",
    "parse_revenue",
    "group_by_quarter",
]

_QUARTER_RE = re.compile(r"^(\d{4})Q([1-9])$")


class CorpusError(ValueError):
    """Malformed review/revenue input."""


@dataclass(frozen=True, order=True)
class Quarter:
    """A calendar quarter, ordered by (year, index)."""

    year: int
    index: int

    def __post_init__(self):
        if self.index not in (1, 2, 3, 4):
            raise CorpusError(f"invalid quarter index: {self.index}")

    @classmethod
    def parse(cls, label: str) -> "Quarter":
        m = _QUARTER_RE.match(label.strip())
        if not m:
            raise CorpusError(f"invalid quarter label: {label!r} (expected YYYYQn)")
        year, index = int(m.group(1)), int(m.group(2))
        if index > 4:
            raise CorpusError(f"invalid quarter index in {label!r}")
        return cls(year, index)

    def next(self) -> "Quarter":
        if self.index == 4:
            return Quarter(self.year + 1, 1)
        return Quarter(self.year, self.index + 1)

    def prev(self) -> "Quarter":
        if self.index == 1:
            return Quarter(self.year - 1, 4)
        return Quarter(self.year, self.index - 1)

    def __str__(self) -> str:
        return f"{self.year}Q{self.index}"


@dataclass(frozen=True)
class Review:
    """One customer review tied to a calendar quarter."""

    id: str
    quarter: Quarter
    text: str
    source: str | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise CorpusError(f"review {self.id!r} has empty text")


@dataclass(frozen=True)
class RevenueSeries:
    """Contiguous quarterly revenue, millions USD, all values positive."""

    quarters: tuple[Quarter, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.quarters) != len(self.values):
            raise CorpusError("quarters and values length mismatch")
        for q, v in zip(self.quarters, self.values):
            if v <= 0:
                raise CorpusError(f"non-positive revenue for {q}: {v}")
        for prev, cur in zip(self.quarters, self.quarters[1:]):
            expected = prev.next()
            if cur != expected:
                raise CorpusError(f"missing {expected} in revenue series")

    def __len__(self) -> int:
        return len(self.quarters)

    def __getitem__(self, quarter: Quarter) -> float:
        try:
            return self.values[self.quarters.index(quarter)]
        except ValueError:
            raise KeyError(quarter) from None


def _build_review(idx, rid, qlabel, text, source, seen_ids):
    if rid is None or rid == "":
        raise CorpusError(f"line {idx}: missing review id")
    if rid in seen_ids:
        raise CorpusError(f"line {idx}: duplicate review id {rid!r}")
    if text is None or not str(text).strip():
        raise CorpusError(f"line {idx}: empty text for review {rid!r}")
    try:
        quarter = Quarter.parse(str(qlabel))
    except CorpusError as e:
        raise CorpusError(f"line {idx}: {e}") from None
    seen_ids.add(rid)
    return Review(id=str(rid), quarter=quarter, text=str(text), source=source or None)


def parse_reviews(data: bytes, format: str = "jsonl") -> list[Review]:
    """Parse a review file (JSONL or CSV) into Review records.

    JSONL lines carry ``id``/``quarter``/``text`` and optional ``source``;
    CSV needs an ``id,quarter,text`` header. Errors carry the 1-based line
    number of the offending record.
    """
    text = data.decode("utf-8")
    seen: set[str] = set()
    reviews: list[Review] = []
    if format == "jsonl":
        for idx, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"line {idx}: malformed JSON ({e.msg})") from None
            if not isinstance(obj, dict):
                raise CorpusError(f"line {idx}: expected a JSON object")
            reviews.append(
                _build_review(idx, obj.get("id"), obj.get("quarter"), obj.get("text"), obj.get("source"), seen)
            )
    elif format == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or not {"id", "quarter", "text"} <= set(reader.fieldnames):
            raise CorpusError("CSV header must contain id,quarter,text")
        for idx, row in enumerate(reader, start=2):
            reviews.append(
                _build_review(idx, row.get("id"), row.get("quarter"), row.get("text"), row.get("source"), seen)
            )
    else:
        raise CorpusError(f"unknown review format: {format!r}")
    return reviews


def parse_revenue(data: bytes) -> RevenueSeries:
    """Parse a ``quarter,revenue`` CSV into a sorted, contiguous RevenueSeries."""
    reader = csv.DictReader(io.StringIO(data.decode("utf-8")))
    if reader.fieldnames is None or not {"quarter", "revenue"} <= set(reader.fieldnames):
        raise CorpusError("CSV header must contain quarter,revenue")
    rows: list[tuple[Quarter, float]] = []
    for idx, row in enumerate(reader, start=2):
        quarter = Quarter.parse(row["quarter"])
        try:
            value = float(row["revenue"])
        except (TypeError, ValueError):
            raise CorpusError(f"line {idx}: non-numeric revenue {row['revenue']!r}") from None
        if value <= 0:
            raise CorpusError(f"line {idx}: non-positive revenue for {quarter}")
        rows.append((quarter, value))
    rows.sort(key=lambda qv: qv[0])
    if len({q for q, _ in rows}) != len(rows):
        raise CorpusError("duplicate quarter in revenue file")
    return RevenueSeries(
        quarters=tuple(q for q, _ in rows),
        values=tuple(v for _, v in rows),
    )


def group_by_quarter(reviews: list[Review]) -> dict[Quarter, list[Review]]:
    """Partition reviews by quarter, preserving input order within each group."""
    groups: dict[Quarter, list[Review]] = {}
    for review in reviews:
        groups.setdefault(review.quarter, []).append(review)
    return groups


def reviews_to_jsonl(reviews: list[Review]) -> bytes:
    """Serialize reviews back to JSONL (inverse of parse_reviews)."""
    lines = []
    for r in reviews:
        obj = {"id": r.id, "quarter": str(r.quarter), "text": r.text}
        if r.source:
            obj["source"] = r.source
        lines.append(json.dumps(obj, ensure_ascii=False))
    return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")
