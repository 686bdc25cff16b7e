"""Parse patent-record files and derive co-registration edges and yearly counts.

Inputs are CSV (with header) or JSON-lines exports. Rows that cannot be
turned into a valid record are quarantined into a rejects list instead of
aborting the whole run; duplicate-id rows after the first are dropped and
counted separately.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .errors import EmptyScopeError, SchemaError

DEFAULT_SCHEMA_MAP = {
    "id": "id",
    "title": "title",
    "abstract": "abstract",
    "contributors": "contributors",
    "date": "date",
}

DEFAULT_YEAR_WINDOW = (1900, 2100)

_YEAR_RE = re.compile(r"^\s*(\d{4})")


@dataclass
class PatentRecord:
    id: str
    title: str
    abstract: str
    contributors: list[str]
    year: int


@dataclass
class CoRegistrationEdge:
    source: str
    target: str
    weight: int


@dataclass
class YearlySeries:
    start_year: int
    counts: list[int]
    cumulative: list[int]

    def years(self) -> list[int]:
        return list(range(self.start_year, self.start_year + len(self.counts)))


@dataclass
class ParseResult:
    records: list[PatentRecord]
    rejects: list[dict] = field(default_factory=list)
    duplicate_ids: int = 0


def canonical_name(name: str) -> str:
    """Identity key for a contributor: whitespace-collapsed, case-folded."""
    return " ".join(name.split()).casefold()


def display_name(name: str) -> str:
    """Whitespace-collapsed form with original casing preserved."""
    return " ".join(name.split())


def _split_contributors(cell, sep: str) -> list[str]:
    if cell is None:
        return []
    if isinstance(cell, (list, tuple)):
        parts = [str(p) for p in cell]
    else:
        parts = str(cell).split(sep)
    out = []
    seen = set()
    for part in parts:
        disp = display_name(part)
        if not disp:
            continue
        key = disp.casefold()
        if key in seen:
            continue
        seen.add(key)
        out.append(disp)
    return out


def _parse_year(cell, window: tuple[int, int]) -> int:
    if cell is None:
        raise ValueError("missing date")
    if isinstance(cell, int):
        year = cell
    else:
        m = _YEAR_RE.match(str(cell))
        if not m:
            raise ValueError(f"unparseable date {cell!r}")
        year = int(m.group(1))
    lo, hi = window
    if not lo <= year <= hi:
        raise ValueError(f"year {year} outside window {lo}..{hi}")
    return year


def _row_to_record(row: dict, schema_map: dict, sep: str,
                   window: tuple[int, int]) -> PatentRecord:
    pid = str(row.get(schema_map["id"], "") or "").strip()
    if not pid:
        raise ValueError("empty id")
    title = str(row.get(schema_map["title"], "") or "")
    abstract = str(row.get(schema_map["abstract"], "") or "")
    contributors = _split_contributors(row.get(schema_map["contributors"]), sep)
    year = _parse_year(row.get(schema_map["date"]), window)
    return PatentRecord(pid, title, abstract, contributors, year)


def parse_corpus(path, format: str = "csv", schema_map: dict | None = None,
                 contributors_sep: str = ";",
                 year_window: tuple[int, int] = DEFAULT_YEAR_WINDOW) -> ParseResult:
    """Read a patent corpus file into validated records.

    ``format`` is ``"csv"`` or ``"jsonl"``. ``schema_map`` maps the logical
    field names (id, title, abstract, contributors, date) to column names in
    the file. Malformed rows land in ``ParseResult.rejects`` as
    ``{"line_no": ..., "reason": ...}``; duplicate-id rows after the first
    are dropped and counted in ``duplicate_ids``.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"corpus file not found: {path}")
    smap = dict(DEFAULT_SCHEMA_MAP)
    if schema_map:
        smap.update(schema_map)

    if format == "csv":
        rows = _iter_csv(path, smap)
    elif format in ("jsonl", "json-lines"):
        rows = _iter_jsonl(path)
    else:
        raise ValueError(f"unknown corpus format {format!r}")

    result = ParseResult(records=[])
    seen_ids: set[str] = set()
    for line_no, row in rows:
        if isinstance(row, Exception):
            result.rejects.append({"line_no": line_no, "reason": str(row)})
            continue
        missing = [c for c in smap.values() if c not in row]
        if missing and format != "csv":
            result.rejects.append(
                {"line_no": line_no, "reason": f"missing column '{missing[0]}'"})
            continue
        try:
            record = _row_to_record(row, smap, contributors_sep, year_window)
        except ValueError as exc:
            result.rejects.append({"line_no": line_no, "reason": str(exc)})
            continue
        if record.id in seen_ids:
            result.duplicate_ids += 1
            continue
        seen_ids.add(record.id)
        result.records.append(record)
    return result


def _iter_csv(path: Path, smap: dict):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return  # empty file, empty corpus
        for col in smap.values():
            if col not in reader.fieldnames:
                raise SchemaError(f"missing column '{col}' in {path.name}")
        for row in reader:
            yield reader.line_num, row


def _iter_jsonl(path: Path):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                yield line_no, ValueError(f"invalid json: {exc.msg}")
                continue
            if not isinstance(obj, dict):
                yield line_no, ValueError("row is not an object")
                continue
            yield line_no, obj


def build_edge_list(corpus: list[PatentRecord]) -> list[CoRegistrationEdge]:
    """Aggregate unordered contributor pairs across the corpus.

    Each patent contributes one count to every pair of its contributors;
    the weight of a pair is therefore the number of patents the two names
    jointly registered. Pairs are emitted once, in lexicographic
    (source, target) order, sorted.
    """
    display: dict[str, str] = {}
    weights: dict[tuple[str, str], int] = {}
    for record in corpus:
        keys = []
        for name in record.contributors:
            key = name.casefold()
            display.setdefault(key, name)
            keys.append(key)
        for a, b in combinations(sorted(set(keys)), 2):
            weights[(a, b)] = weights.get((a, b), 0) + 1
    edges = []
    for (a, b), w in weights.items():
        da, db = display[a], display[b]
        if db < da:
            da, db = db, da
        edges.append(CoRegistrationEdge(da, db, w))
    edges.sort(key=lambda e: (e.source, e.target))
    return edges


def yearly_series(corpus: list[PatentRecord],
                  include_ids: set[str] | None = None) -> YearlySeries:
    """Per-year and cumulative patent counts, gaps zero-filled.

    ``include_ids`` restricts the series to a subset of patents (e.g. one
    text cluster). An empty scope is an error: there is nothing to fit.
    """
    years = [r.year for r in corpus
             if include_ids is None or r.id in include_ids]
    if not years:
        raise EmptyScopeError("no records in scope for yearly series")
    start, end = min(years), max(years)
    counts = [0] * (end - start + 1)
    for y in years:
        counts[y - start] += 1
    cumulative = []
    total = 0
    for c in counts:
        total += c
        cumulative.append(total)
    return YearlySeries(start, counts, cumulative)
