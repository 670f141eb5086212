"""Geometry quantization by a quantization scale, and NN label transfer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from segrd.errors import EmptyCloud, InvalidQs
from segrd.kitti import LabeledCloud
from segrd.spatial import build_index, nearest_map


@dataclass(frozen=True)
class QuantizeConfig:
    qs: float
    merge_duplicates: bool = True
    dequantize: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.qs) and self.qs > 0):
            raise InvalidQs(f"qs must be a positive finite number, got {self.qs}")


def round_half_away(x: np.ndarray) -> np.ndarray:
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def quantize_positions(positions, qs: float) -> np.ndarray:
    """Integer cell coordinates round(p * qs), as int64."""
    if not (np.isfinite(qs) and qs > 0):
        raise InvalidQs(f"qs must be a positive finite number, got {qs}")
    scaled = np.asarray(positions, dtype=np.float64) * qs
    return round_half_away(scaled).astype(np.int64)


def quantize_geometry(cloud: LabeledCloud, config: QuantizeConfig) -> LabeledCloud:
    cells = quantize_positions(cloud.positions, config.qs)
    keep = np.arange(len(cloud))
    if config.merge_duplicates and len(cloud):
        _, first = np.unique(cells, axis=0, return_index=True)
        keep = np.sort(first)
        cells = cells[keep]
    positions = cells / config.qs if config.dequantize else cells.astype(np.float64)
    return LabeledCloud(
        positions,
        cloud.reflectance[keep],
        cloud.labels[keep],
        cloud.instance_ids[keep],
    )


def oracle_segment(degraded_geometry: LabeledCloud, reference: LabeledCloud) -> LabeledCloud:
    """Label each degraded point with the label of its nearest reference point."""
    if len(degraded_geometry) == 0 or len(reference) == 0:
        raise EmptyCloud("oracle segmentation needs two non-empty clouds")
    nn = nearest_map(degraded_geometry.positions, build_index(reference.positions))
    return degraded_geometry.with_labels(
        reference.labels[nn.target_index], reference.instance_ids[nn.target_index]
    )
