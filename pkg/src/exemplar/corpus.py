"""Submission dataset: per-line JSON records grouped into per-task corpora.

Input schema (JSON-lines, UTF-8, one object per line, unknown fields
ignored): {"id", "task_id", "code", "quality", "timestamp"}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional


@dataclass(frozen=True)
class Solution:
    id: str
    task_id: str
    code: str
    quality: int
    timestamp: int


@dataclass
class TaskCorpus:
    task_id: str
    solutions: list[Solution]  # stable input order


@dataclass(frozen=True)
class RejectedRecord:
    line_number: int
    reason: str


@dataclass
class LoadResult:
    tasks: list[TaskCorpus]
    rejects: list[RejectedRecord] = field(default_factory=list)


class CorpusError(Exception):
    """Fatal I/O or format failure; record-level problems go to rejects."""


def validate_solution(record: dict, default_quality: Optional[int] = None) -> Solution:
    """Build a Solution from a raw record, raising ValueError on bad fields."""
    for key in ("id", "task_id"):
        value = record.get(key)
        if not isinstance(value, str) or not value:
            raise ValueError(f"missing field: {key}")
    code = record.get("code")
    if not isinstance(code, str):
        raise ValueError("missing field: code")
    if not code.strip():
        raise ValueError("empty code")
    quality = record.get("quality", default_quality)
    if quality is None:
        raise ValueError("missing field: quality")
    if isinstance(quality, bool) or not isinstance(quality, int):
        raise ValueError("non-integer quality")
    timestamp = record.get("timestamp")
    if timestamp is None:
        raise ValueError("missing field: timestamp")
    if isinstance(timestamp, bool) or not isinstance(timestamp, int):
        raise ValueError("non-integer timestamp")
    return Solution(record["id"], record["task_id"], code, quality, timestamp)


def load_corpus(path: str | Path, default_quality: Optional[int] = None) -> LoadResult:
    """Load and group the JSON-lines corpus, accumulating per-record rejects.

    Tasks appear in order of first occurrence; each task preserves input
    order of its solutions.  Blank lines are not records.  Every record ends
    up either in a TaskCorpus or in rejects.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc

    tasks: dict[str, TaskCorpus] = {}
    rejects: list[RejectedRecord] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            rejects.append(RejectedRecord(lineno, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(record, dict):
            rejects.append(RejectedRecord(lineno, "record is not an object"))
            continue
        try:
            solution = validate_solution(record, default_quality)
        except ValueError as exc:
            rejects.append(RejectedRecord(lineno, str(exc)))
            continue
        if solution.id in seen_ids:
            rejects.append(RejectedRecord(lineno, f"duplicate id: {solution.id}"))
            continue
        seen_ids.add(solution.id)
        tasks.setdefault(solution.task_id, TaskCorpus(solution.task_id, [])).solutions.append(solution)
    return LoadResult(list(tasks.values()), rejects)
