"""File formats: line-delimited JSON for datasets and tables, CSV for metrics.

The first line of every file is a header object carrying format_version,
the label count, and k; each following line is one record. Floats are
written with Python's shortest round-trip repr, so write-then-read is an
identity and outputs are byte-stable for a fixed input.
"""

from __future__ import annotations

import csv
import io as _io
import json

from .calibrate import CalibrationTable, SnapshotDataset
from .errors import FormatError
from .mixture import mixture_from_arrays
from .simplex import LabelSpace, Snapshot

FORMAT_VERSION = 1


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def _read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError(f"{path} is empty")
    return lines


def _parse_header(lines, path, expect_kind=None):
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: bad header: {exc}", line=1) from None
    if not isinstance(header, dict):
        raise FormatError(f"{path}: header must be an object", line=1)
    version = header.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format_version {version!r}", line=1)
    for key in ("num_labels", "k"):
        if not isinstance(header.get(key), int) or header[key] < 1:
            raise FormatError(f"{path}: header needs a positive integer {key!r}", line=1)
    if expect_kind is not None and header.get("kind") != expect_kind:
        raise FormatError(f"{path}: expected kind {expect_kind!r}, got {header.get('kind')!r}", line=1)
    return header


def read_snapshot_dataset(path) -> SnapshotDataset:
    """Parse a dataset file: a header line, then {"partition", "labels"} records.

    Label lists are symmetrized into count vectors immediately; [1, 0] and
    [0, 1] are the same snapshot.
    """
    lines = _read_lines(path)
    header = _parse_header(lines, path)
    num_labels, k = header["num_labels"], header["k"]
    records = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}", line=lineno) from None
        if not isinstance(rec, dict) or "partition" not in rec or "labels" not in rec:
            raise FormatError(f"{path}: record needs 'partition' and 'labels'", line=lineno)
        labels = rec["labels"]
        if not isinstance(labels, list) or len(labels) != k:
            raise FormatError(f"{path}: expected {k} labels", line=lineno)
        counts = [0] * num_labels
        for y in labels:
            if not isinstance(y, int) or not 0 <= y < num_labels:
                raise FormatError(f"{path}: label {y!r} out of range [0, {num_labels})", line=lineno)
            counts[y] += 1
        records.append((str(rec["partition"]), Snapshot(tuple(counts))))
    if not records:
        raise FormatError(f"{path}: no records")
    return SnapshotDataset(records=tuple(records), space=LabelSpace(num_labels), k=k)


def write_snapshot_dataset(ds: SnapshotDataset, path):
    """Write records with labels expanded in canonical ascending order."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dump({"format_version": FORMAT_VERSION, "k": ds.k, "num_labels": ds.space.num_labels}) + "\n")
        for pid, snap in ds.records:
            labels = [y for y, c in enumerate(snap.counts) for _ in range(c)]
            fh.write(_dump({"labels": labels, "partition": pid}) + "\n")


def read_calibration_table(path) -> CalibrationTable:
    lines = _read_lines(path)
    header = _parse_header(lines, path, expect_kind="calibration_table")
    num_labels, k = header["num_labels"], header["k"]
    space = LabelSpace(num_labels)
    entries = {}
    counts = {}
    any_counts = False
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}", line=lineno) from None
        try:
            pid = str(rec["partition"])
            points = rec["points"]
            weights = rec["weights"]
        except (TypeError, KeyError):
            raise FormatError(f"{path}: record needs 'partition', 'points', 'weights'", line=lineno) from None
        if pid in entries:
            raise FormatError(f"{path}: duplicate partition {pid!r}", line=lineno)
        if not isinstance(points, list) or not isinstance(weights, list) or len(points) != len(weights):
            raise FormatError(f"{path}: points and weights must be lists of equal length", line=lineno)
        entries[pid] = mixture_from_arrays([tuple(p) for p in points], weights, space)
        if rec.get("count") is not None:
            counts[pid] = int(rec["count"])
            any_counts = True
    if not entries:
        raise FormatError(f"{path}: no partitions")
    return CalibrationTable(
        entries=entries, k=k, space=space, counts=counts if any_counts else None
    )


def write_calibration_table(table: CalibrationTable, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            _dump(
                {
                    "format_version": FORMAT_VERSION,
                    "k": table.k,
                    "kind": "calibration_table",
                    "num_labels": table.space.num_labels,
                }
            )
            + "\n"
        )
        for pid in table.partitions:
            mix = table.entries[pid]
            rec = {
                "count": None if table.counts is None else table.counts.get(pid),
                "partition": pid,
                "points": [list(p.probs) for p, _ in mix.support],
                "weights": [w for _, w in mix.support],
            }
            fh.write(_dump(rec) + "\n")


def rows_to_csv(rows, fieldnames) -> str:
    """Render dict rows as CSV text with a fixed column order."""
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def read_csv_rows(path) -> list:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))