"""Semantic KITTI scan/label file I/O.

Scan files hold N records of four little-endian float32 values
(x, y, z, reflectance). Label files hold N little-endian uint32 words whose
low 16 bits are the semantic class and high 16 bits the instance id.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from segrd.errors import IoError, LabelCountMismatch, MalformedScan

PathLike = Union[str, os.PathLike]

SCAN_DTYPE = np.dtype("<f4")
LABEL_DTYPE = np.dtype("<u4")
SCAN_RECORD_BYTES = 16
LABEL_RECORD_BYTES = 4


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LabeledCloud:
    """Index-aligned positions (N, 3), reflectance, semantic labels and instance ids.

    Arrays are copied to their canonical dtypes and made read-only.
    """

    positions: np.ndarray
    reflectance: np.ndarray
    labels: np.ndarray
    instance_ids: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float32).reshape(-1, 3)
        n = len(pos)
        refl = np.asarray(self.reflectance, dtype=np.float32).reshape(-1)
        lab = np.asarray(self.labels, dtype=np.uint16).reshape(-1)
        inst = np.asarray(self.instance_ids, dtype=np.uint16).reshape(-1)
        if not (len(refl) == len(lab) == len(inst) == n):
            raise ValueError(
                f"field lengths differ: positions={n}, reflectance={len(refl)}, "
                f"labels={len(lab)}, instance_ids={len(inst)}"
            )
        object.__setattr__(self, "positions", _frozen(pos.copy()))
        object.__setattr__(self, "reflectance", _frozen(refl.copy()))
        object.__setattr__(self, "labels", _frozen(lab.copy()))
        object.__setattr__(self, "instance_ids", _frozen(inst.copy()))

    def __len__(self) -> int:
        return len(self.positions)

    @classmethod
    def from_arrays(cls, positions, labels=None, reflectance=None, instance_ids=None) -> "LabeledCloud":
        positions = np.asarray(positions, dtype=np.float32).reshape(-1, 3)
        n = len(positions)
        zeros = np.zeros(n)
        return cls(
            positions,
            zeros if reflectance is None else reflectance,
            zeros if labels is None else labels,
            zeros if instance_ids is None else instance_ids,
        )

    def with_labels(self, labels, instance_ids=None) -> "LabeledCloud":
        if instance_ids is None:
            instance_ids = self.instance_ids
        return LabeledCloud(self.positions, self.reflectance, labels, instance_ids)

    def equals(self, other: "LabeledCloud") -> bool:
        """Bit-exact comparison of all four fields."""
        return (
            len(self) == len(other)
            and self.positions.tobytes() == other.positions.tobytes()
            and self.reflectance.tobytes() == other.reflectance.tobytes()
            and self.labels.tobytes() == other.labels.tobytes()
            and self.instance_ids.tobytes() == other.instance_ids.tobytes()
        )


@dataclass(frozen=True)
class ScanPair:
    reference: LabeledCloud
    degraded: LabeledCloud


def _read_bytes(path: PathLike) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"{path}: {exc.strerror or exc}") from exc


def decode_label_words(words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    words = np.asarray(words, dtype=np.uint32)
    return (words & 0xFFFF).astype(np.uint16), (words >> 16).astype(np.uint16)


def encode_label_words(labels: np.ndarray, instance_ids: np.ndarray) -> np.ndarray:
    return (np.asarray(instance_ids, dtype=np.uint32) << 16) | np.asarray(labels, dtype=np.uint32)


def load_scan(scan_path: PathLike, label_path: Optional[PathLike] = None) -> LabeledCloud:
    raw = _read_bytes(scan_path)
    if len(raw) % SCAN_RECORD_BYTES:
        raise MalformedScan(f"{scan_path}: {len(raw)} bytes is not a multiple of {SCAN_RECORD_BYTES}")
    records = np.frombuffer(raw, dtype=SCAN_DTYPE).reshape(-1, 4)
    positions = records[:, :3]
    if not np.isfinite(positions).all():
        bad = int(np.flatnonzero(~np.isfinite(positions).all(axis=1))[0])
        raise MalformedScan(f"{scan_path}: non-finite coordinate at point {bad}")
    n = len(records)

    if label_path is None:
        labels = instance_ids = np.zeros(n, dtype=np.uint16)
    else:
        lraw = _read_bytes(label_path)
        if len(lraw) % LABEL_RECORD_BYTES:
            raise LabelCountMismatch(
                f"{label_path}: {len(lraw)} bytes is not a multiple of {LABEL_RECORD_BYTES}"
            )
        if len(lraw) // LABEL_RECORD_BYTES != n:
            raise LabelCountMismatch(
                f"{label_path}: {len(lraw) // LABEL_RECORD_BYTES} labels for {n} points in {scan_path}"
            )
        labels, instance_ids = decode_label_words(np.frombuffer(lraw, dtype=LABEL_DTYPE))

    return LabeledCloud(positions, records[:, 3], labels, instance_ids)


def save_scan(cloud: LabeledCloud, scan_path: PathLike, label_path: Optional[PathLike] = None) -> None:
    records = np.empty((len(cloud), 4), dtype=SCAN_DTYPE)
    records[:, :3] = cloud.positions
    records[:, 3] = cloud.reflectance
    try:
        Path(scan_path).write_bytes(records.tobytes())
        if label_path is not None:
            words = encode_label_words(cloud.labels, cloud.instance_ids).astype(LABEL_DTYPE)
            Path(label_path).write_bytes(words.tobytes())
    except OSError as exc:
        raise IoError(f"{exc.filename or scan_path}: {exc.strerror or exc}") from exc


def enumerate_sequence(
    directory: PathLike, limit: Optional[int] = None
) -> list[tuple[Path, Optional[Path]]]:
    """Pair ``velodyne/*.bin`` with ``labels/*.label`` by stem, sorted lexicographically."""
    root = Path(directory)
    if not root.is_dir():
        raise IoError(f"{root}: not a directory")
    velodyne = root / "velodyne"
    labels = root / "labels"
    scans = sorted(velodyne.glob("*.bin")) if velodyne.is_dir() else []
    pairs = []
    for scan in scans:
        label = labels / f"{scan.stem}.label"
        pairs.append((scan, label if label.is_file() else None))
    if limit is not None:
        pairs = pairs[:limit]
    return pairs
