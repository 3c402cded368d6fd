"""Annotation data model: records, label spaces, and the reliability grid.

The ingestion atom is one ``AnnotationRecord``: a single (doc_class, doc_id,
item_id, annotator_id, label) observation. Records are aligned into a
``ReliabilityData`` grid of units x annotators with missing cells allowed;
every agreement statistic consumes that grid.

Field handling: all five fields are whitespace-trimmed and NFC-normalized at
construction, and label comparison is case-sensitive (key tags are
identifiers; case-folding would hide genuine disagreement). Unit and
annotator orderings are always sorted, so identical record sets produce
bit-identical grids regardless of input order.
"""

from __future__ import annotations

import csv
import io
import json
import unicodedata
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DuplicateAssignment,
    EmptyDataset,
    EmptyField,
    EmptySlice,
    MalformedLine,
    ParseError,
    UnknownAnnotator,
    UnknownLabel,
)

FIELD_NAMES = ("doc_class", "doc_id", "item_id", "annotator_id", "label")

MISSING = -1  # grid sentinel for an absent annotation


def _clean(value: str) -> str:
    return unicodedata.normalize("NFC", value.strip())


@dataclass(frozen=True, order=True)
class UnitKey:
    """Identity of one thing annotators must agree on; ordering is lexicographic."""

    doc_class: str
    doc_id: str
    item_id: str


@dataclass(frozen=True)
class AnnotationRecord:
    """One label assigned by one annotator to one unit."""

    doc_class: str
    doc_id: str
    item_id: str
    annotator_id: str
    label: str

    @classmethod
    def normalized(
        cls,
        doc_class: str,
        doc_id: str,
        item_id: str,
        annotator_id: str,
        label: str,
        line: int | None = None,
    ) -> "AnnotationRecord":
        """Trim + NFC-normalize all fields, rejecting any that end up empty."""
        values = {}
        for name, raw in zip(FIELD_NAMES, (doc_class, doc_id, item_id, annotator_id, label)):
            cleaned = _clean(raw)
            if not cleaned:
                raise EmptyField(f"field '{name}' is empty", line=line)
            values[name] = cleaned
        return cls(**values)

    @property
    def unit(self) -> UnitKey:
        return UnitKey(self.doc_class, self.doc_id, self.item_id)


@dataclass(frozen=True)
class LabelSpace:
    """Ordered set of category labels.

    origin="observed": labels collected from the data, sorted lexicographically.
    origin="declared": labels supplied up front, kept in declaration order; every
    record label must be a member.
    """

    labels: tuple[str, ...]
    origin: str = "observed"

    def __post_init__(self):
        if self.origin not in ("observed", "declared"):
            raise ValueError(f"bad label space origin: {self.origin!r}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels in label space")

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def index(self, label: str) -> int:
        return self.labels.index(label)


class ReliabilityData:
    """Units x annotators grid of label indices, with -1 marking missing cells.

    Immutable after construction; safe to share across threads. ``grid[u, a]``
    is the index into ``labels.labels`` of the label annotator ``a`` gave unit
    ``u``, or -1 when that annotator did not label that unit.
    """

    __slots__ = ("units", "annotators", "labels", "grid")

    def __init__(
        self,
        units: Sequence[UnitKey],
        annotators: Sequence[str],
        labels: LabelSpace,
        grid: np.ndarray,
    ):
        grid = np.asarray(grid, dtype=np.int32)
        if grid.shape != (len(units), len(annotators)):
            raise ValueError(
                f"grid shape {grid.shape} != ({len(units)}, {len(annotators)})"
            )
        if grid.size and grid.max(initial=MISSING) >= len(labels):
            raise ValueError("grid contains a label index outside the label space")
        grid.flags.writeable = False
        object.__setattr__(self, "units", tuple(units))
        object.__setattr__(self, "annotators", tuple(annotators))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "grid", grid)

    def __setattr__(self, name, value):
        raise AttributeError("ReliabilityData is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReliabilityData):
            return NotImplemented
        return (
            self.units == other.units
            and self.annotators == other.annotators
            and self.labels == other.labels
            and np.array_equal(self.grid, other.grid)
        )

    def __hash__(self):
        return hash((self.units, self.annotators, self.labels, self.grid.tobytes()))

    @property
    def n_units(self) -> int:
        return len(self.units)

    @property
    def n_annotators(self) -> int:
        return len(self.annotators)

    def annotator_index(self, annotator_id: str) -> int:
        try:
            return self.annotators.index(annotator_id)
        except ValueError:
            raise UnknownAnnotator(f"annotator {annotator_id!r} not in data") from None

    def doc_classes(self) -> tuple[str, ...]:
        return tuple(sorted({u.doc_class for u in self.units}))

    def slice(
        self,
        by_doc_class: str | None = None,
        by_annotators: Iterable[str] | None = None,
    ) -> "ReliabilityData":
        """Restrict to one document class or to a subset of annotators.

        Exactly one selector per call; chain calls to combine. Units left with
        zero present cells are dropped; the label space is unchanged.
        """
        if (by_doc_class is None) == (by_annotators is None):
            raise ValueError("pass exactly one of by_doc_class / by_annotators")
        if by_doc_class is not None:
            keep = [i for i, u in enumerate(self.units) if u.doc_class == by_doc_class]
            if not keep:
                raise EmptySlice(f"no units with doc_class {by_doc_class!r}")
            return ReliabilityData(
                [self.units[i] for i in keep],
                self.annotators,
                self.labels,
                self.grid[keep, :].copy(),
            )
        wanted = set(by_annotators)
        cols = [i for i, a in enumerate(self.annotators) if a in wanted]
        if len(cols) < 2:
            raise EmptySlice(
                f"annotator selector matched {len(cols)} of the required 2+ annotators"
            )
        sub = self.grid[:, cols].copy()
        keep = [i for i in range(sub.shape[0]) if (sub[i] != MISSING).any()]
        if not keep:
            raise EmptySlice("no unit retains any annotation after slicing")
        return ReliabilityData(
            [self.units[i] for i in keep],
            [self.annotators[i] for i in cols],
            self.labels,
            sub[keep, :],
        )

    def to_records(self) -> list[AnnotationRecord]:
        """Expand the grid back into records, in unit-then-annotator order."""
        out = []
        for ui, unit in enumerate(self.units):
            for ai, annotator in enumerate(self.annotators):
                code = int(self.grid[ui, ai])
                if code != MISSING:
                    out.append(
                        AnnotationRecord(
                            unit.doc_class,
                            unit.doc_id,
                            unit.item_id,
                            annotator,
                            self.labels.labels[code],
                        )
                    )
        return out


def _decode(source: bytes | IO[bytes] | io.TextIOBase | str) -> str:
    if isinstance(source, str):
        return source
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif hasattr(source, "read"):
        data = source.read()
        if isinstance(data, str):
            return data
    else:
        raise TypeError(f"unsupported source type: {type(source)!r}")
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data[: exc.start].count(b"\n") + 1
        raise MalformedLine(f"invalid UTF-8 ({exc.reason})", line=line) from None


def _iter_jsonl(text: str) -> Iterator[tuple[int, AnnotationRecord | ParseError]]:
    required = set(FIELD_NAMES)
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield lineno, MalformedLine(f"invalid JSON ({exc.msg})", line=lineno)
            continue
        if not isinstance(obj, dict):
            yield lineno, MalformedLine("expected a JSON object", line=lineno)
            continue
        keys = set(obj)
        if keys != required:
            missing = sorted(required - keys)
            unknown = sorted(keys - required)
            parts = []
            if missing:
                parts.append(f"missing keys {missing}")
            if unknown:
                parts.append(f"unknown keys {unknown}")
            yield lineno, MalformedLine("; ".join(parts), line=lineno)
            continue
        bad_type = [k for k in FIELD_NAMES if not isinstance(obj[k], str)]
        if bad_type:
            yield lineno, MalformedLine(
                f"non-string values for {bad_type}", line=lineno
            )
            continue
        try:
            yield lineno, AnnotationRecord.normalized(
                *(obj[k] for k in FIELD_NAMES), line=lineno
            )
        except ParseError as exc:
            yield lineno, exc


def _iter_csv(text: str) -> Iterator[tuple[int, AnnotationRecord | ParseError]]:
    if text.startswith("﻿"):
        text = text[1:]
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return
    if [h.strip() for h in header] != list(FIELD_NAMES):
        yield 1, MalformedLine(
            f"header must be exactly {','.join(FIELD_NAMES)}", line=1
        )
        return
    for row in reader:
        lineno = reader.line_num
        if not row:
            continue
        if len(row) != len(FIELD_NAMES):
            yield lineno, MalformedLine(
                f"expected {len(FIELD_NAMES)} fields, got {len(row)}", line=lineno
            )
            continue
        try:
            yield lineno, AnnotationRecord.normalized(*row, line=lineno)
        except ParseError as exc:
            yield lineno, exc


def iter_parsed(
    source, format: str
) -> Iterator[tuple[int, AnnotationRecord | ParseError]]:
    """Yield (line, record-or-error) pairs without stopping at the first error.

    Duplicate (unit, annotator) assignments are reported as errors on the
    second occurrence, citing both lines.
    """
    if format == "jsonl":
        stream = _iter_jsonl(_decode(source))
    elif format == "csv":
        stream = _iter_csv(_decode(source))
    else:
        raise ValueError(f"unknown format {format!r} (expected 'jsonl' or 'csv')")
    seen: dict[tuple[str, str, str, str], int] = {}
    for lineno, item in stream:
        if isinstance(item, AnnotationRecord):
            key = (item.doc_class, item.doc_id, item.item_id, item.annotator_id)
            first = seen.get(key)
            if first is not None:
                yield lineno, DuplicateAssignment(
                    f"unit ({item.doc_class},{item.doc_id},{item.item_id}) "
                    f"already labeled by {item.annotator_id!r}",
                    first_line=first,
                    second_line=lineno,
                )
                continue
            seen[key] = lineno
        yield lineno, item


def parse_records(source, format: str) -> list[AnnotationRecord]:
    """Parse a JSONL or CSV byte stream into records, raising on the first error."""
    records = []
    for _, item in iter_parsed(source, format):
        if isinstance(item, ParseError):
            raise item
        records.append(item)
    return records


def serialize_records(records: Iterable[AnnotationRecord], format: str) -> bytes:
    """Inverse of parse_records: parse(serialize(records)) == records."""
    if format == "jsonl":
        lines = [
            json.dumps(
                {k: getattr(r, k) for k in FIELD_NAMES}, ensure_ascii=False
            )
            for r in records
        ]
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELD_NAMES)
        for r in records:
            writer.writerow([getattr(r, k) for k in FIELD_NAMES])
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unknown format {format!r} (expected 'jsonl' or 'csv')")


def build_reliability_matrix(
    records: Sequence[AnnotationRecord],
    declared_labels: Sequence[str] | None = None,
) -> ReliabilityData:
    """Align records into the sorted units x annotators grid.

    Unit and annotator orders are sorted, so the result is bit-identical for
    any permutation of the same record set.
    """
    if not records:
        raise EmptyDataset("no records")
    if declared_labels is not None:
        cleaned = [_clean(l) for l in declared_labels]
        if len(set(cleaned)) != len(cleaned):
            raise ValueError("duplicate declared labels")
        space = LabelSpace(tuple(cleaned), origin="declared")
        for r in records:
            if r.label not in space:
                raise UnknownLabel(
                    f"label {r.label!r} not in declared label space"
                )
    else:
        space = LabelSpace(tuple(sorted({r.label for r in records})))
    units = sorted({r.unit for r in records})
    annotators = sorted({r.annotator_id for r in records})
    unit_pos = {u: i for i, u in enumerate(units)}
    ann_pos = {a: i for i, a in enumerate(annotators)}
    grid = np.full((len(units), len(annotators)), MISSING, dtype=np.int32)
    for r in records:
        u, a = unit_pos[r.unit], ann_pos[r.annotator_id]
        if grid[u, a] != MISSING:
            raise DuplicateAssignment(
                f"unit ({r.doc_class},{r.doc_id},{r.item_id}) "
                f"labeled twice by {r.annotator_id!r}"
            )
        grid[u, a] = space.index(r.label)
    return ReliabilityData(units, annotators, space, grid)
