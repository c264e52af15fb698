"""Stream ingestion and trace/event emission.

Traces are RFC-4180-style CSV (UTF-8, LF) with the fixed header
``n,k,xb,xb_lambda,db,db_lambda`` plus an optional trailing ``label`` column.
Undefined or disabled index values serialize as empty cells. Floats use
Python's shortest round-trip repr so written values parse back exactly.
Events are line-delimited tab-separated records: n, kind, detail.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import StreamPoint
from .cvi import INDEX_FAMILIES

TRACE_COLUMNS = ("n", "k") + INDEX_FAMILIES


@dataclass(frozen=True)
class TraceRecord:
    n: int
    k: int
    values: dict = field(default_factory=dict)  # family -> float or None
    label: int | None = None


@dataclass(frozen=True)
class EventRecord:
    n: int
    kind: str
    detail: str = ""


class IngestionError(ValueError):
    """A stream file could not be parsed; the message names the row."""


@dataclass(frozen=True)
class StreamSchema:
    """Column layout of a stream CSV: feature columns and an optional label."""

    feature_columns: tuple[int, ...] = (0, 1)
    label_column: int | None = None
    has_header: bool = False


def read_stream(path, schema: StreamSchema = StreamSchema()):
    """Read points (and labels, if the schema names a label column).

    Returns (points, labels); labels is None without a label column.
    """
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"stream file not found: {path}")
    points: list[StreamPoint] = []
    labels: list[int] | None = [] if schema.label_column is not None else None
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row_no, row in enumerate(reader, start=1):
            if schema.has_header and row_no == 1:
                continue
            if not row:
                continue
            needed = max(
                max(schema.feature_columns),
                -1 if schema.label_column is None else schema.label_column,
            )
            if len(row) <= needed:
                raise IngestionError(f"row {row_no}: expected at least {needed + 1} columns")
            try:
                x = np.array([float(row[c]) for c in schema.feature_columns])
            except ValueError as exc:
                raise IngestionError(f"row {row_no}: non-numeric feature cell ({exc})") from None
            if not np.all(np.isfinite(x)):
                raise IngestionError(f"row {row_no}: non-finite feature value")
            points.append(StreamPoint(n=len(points) + 1, x=x))
            if labels is not None:
                try:
                    labels.append(int(float(row[schema.label_column])))
                except ValueError:
                    raise IngestionError(f"row {row_no}: non-numeric label cell") from None
    return points, labels


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float) and math.isnan(v):
        return ""
    return repr(float(v))


def write_trace(records, path) -> None:
    records = list(records)
    with_labels = any(r.label is not None for r in records)
    header = TRACE_COLUMNS + (("label",) if with_labels else ())
    with Path(path).open("w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for r in records:
            row = [str(r.n), str(r.k)]
            row += [_fmt(r.values.get(fam)) for fam in INDEX_FAMILIES]
            if with_labels:
                row.append("" if r.label is None else str(r.label))
            writer.writerow(row)


def read_trace(path):
    """Parse a trace CSV back into TraceRecords (round-trip of write_trace)."""
    records = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        with_labels = header[-1] == "label"
        for row in reader:
            values = {
                fam: (float(cell) if cell else None)
                for fam, cell in zip(INDEX_FAMILIES, row[2:6])
            }
            label = None
            if with_labels and len(row) > 6 and row[6]:
                label = int(row[6])
            records.append(
                TraceRecord(n=int(row[0]), k=int(row[1]), values=values, label=label)
            )
    return records


def write_events(records, path) -> None:
    with Path(path).open("w", newline="\n", encoding="utf-8") as fh:
        for r in records:
            detail = r.detail.replace("\t", " ").replace("\n", " ")
            fh.write(f"{r.n}\t{r.kind}\t{detail}\n")


def read_events(path):
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            n, kind, detail = line.split("\t", 2)
            records.append(EventRecord(n=int(n), kind=kind, detail=detail))
    return records
