"""Aggregation of per-scan results into rate-distortion records, CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO, Union

from segrd.errors import EmptyInput, FormatError, IoError, UsageError
from segrd.metric import LabelMetricResult, MetricConfig
from segrd.rate import rate_order

UNLABELED = 0
COLUMNS = (
    "rate_point",
    "throughput_mb_s",
    "label_id",
    "label_name",
    "delta",
    "s_count",
    "e_count",
    "eh_count",
    "scan_count",
)
MODES = ("pooled", "mean")


@dataclass(frozen=True)
class RdRecord:
    rate_point: str
    throughput_mb_s: Optional[float]
    label_id: int
    label_name: str
    delta: Optional[float]
    s_count: int
    e_count: int
    eh_count: int
    scan_count: int

    def sort_key(self):
        return (rate_order(self.rate_point), self.label_id)


def aggregate(
    results: Sequence[Sequence[LabelMetricResult]],
    mode: str = "pooled",
    config: MetricConfig = MetricConfig(),
    rate_point: str = "",
    throughput_mb_s: Optional[float] = None,
    class_map: Optional[dict] = None,
    include_unlabeled: bool = False,
) -> list[RdRecord]:
    """Fold per-scan label results into one record per label.

    ``pooled`` divides summed counts (human labels use the weighted form on the
    summed counts); ``mean`` averages the per-scan deltas that are present.
    scan_count is the number of scans where the label occurred (s_count > 0).
    """
    if mode not in MODES:
        raise UsageError(f"unknown aggregation mode {mode!r}")
    if not results:
        raise EmptyInput("no scan results to aggregate")
    class_map = class_map or {}
    per_label: dict[int, list[LabelMetricResult]] = {}
    for scan in results:
        for r in scan:
            if r.label == UNLABELED and not include_unlabeled:
                continue
            per_label.setdefault(r.label, []).append(r)

    records = []
    for label in sorted(per_label):
        rs = [r for r in per_label[label] if r.s_count > 0]
        if not rs:
            continue
        s = sum(r.s_count for r in rs)
        e = sum(r.e_count for r in rs)
        eh = sum(r.eh_count for r in rs)
        if mode == "pooled":
            alpha = config.alpha if label in config.human_labels else 0.0
            d = float(LabelMetricResult(label, s, e, eh, alpha).fraction)
        else:
            d = float(sum((r.fraction for r in rs), Fraction(0)) / len(rs))
        records.append(
            RdRecord(rate_point, throughput_mb_s, label, class_map.get(label, str(label)),
                     d, s, e, eh, len(rs))
        )
    return records


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _row(r: RdRecord) -> list:
    return [getattr(r, c) for c in COLUMNS]


def to_csv(records: Iterable[RdRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in sorted(records, key=RdRecord.sort_key):
        w.writerow([_fmt(v) for v in _row(r)])
    return buf.getvalue()


def to_json(records: Iterable[RdRecord]) -> str:
    rows = [dict(zip(COLUMNS, _row(r))) for r in sorted(records, key=RdRecord.sort_key)]
    return json.dumps(rows, indent=2) + "\n"


def render(records: Iterable[RdRecord], fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(records)
    if fmt == "json":
        return to_json(records)
    raise UsageError(f"unknown output format {fmt!r}")


def emit(records: Iterable[RdRecord], fmt: str, destination: Union[str, os.PathLike, TextIO]) -> None:
    text = render(records, fmt)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        Path(destination).write_text(text)
    except OSError as exc:
        raise IoError(f"{destination}: {exc.strerror or exc}") from exc


def _opt_float(s: str) -> Optional[float]:
    return None if s == "" else float(s)


def parse_csv(text: str) -> list[RdRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != COLUMNS:
        raise FormatError("CSV header does not match the record columns")
    out = []
    for row in rows[1:]:
        if len(row) != len(COLUMNS):
            raise FormatError(f"bad CSV row: {row}")
        rp, tp, lid, name, d, s, e, eh, n = row
        out.append(RdRecord(rp, _opt_float(tp), int(lid), name, _opt_float(d),
                            int(s), int(e), int(eh), int(n)))
    return out


def load_class_map(path) -> dict[int, str]:
    """Read ``<id>,<name>`` lines; blank lines and ``#`` comments are skipped."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"{path}: {exc.strerror or exc}") from exc
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, name = line.partition(",")
        if not sep:
            raise FormatError(f"{path}:{lineno}: expected '<id>,<name>'")
        try:
            mapping[int(key)] = name.strip()
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad class id {key!r}") from None
    return mapping


def load_rate_manifest(path) -> dict[str, int]:
    """Read a JSON array of ``{"scan_id": ..., "bitstream_bytes": ...}`` objects."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise IoError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, list):
        raise FormatError(f"{path}: expected a JSON array")
    manifest = {}
    for entry in data:
        try:
            manifest[str(entry["scan_id"])] = int(entry["bitstream_bytes"])
        except (TypeError, KeyError, ValueError):
            raise FormatError(f"{path}: bad manifest entry {entry!r}") from None
    return manifest
