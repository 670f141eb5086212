"""Segmentation distortion under lossy LiDAR point cloud compression."""

from segrd.errors import (
    EmptyCloud,
    EmptyInput,
    InvalidQs,
    IoError,
    LabelCountMismatch,
    LengthMismatch,
    MalformedScan,
    NegativeAlpha,
    SegRdError,
    ZeroFrames,
)
from segrd.kitti import LabeledCloud, ScanPair, enumerate_sequence, load_scan, save_scan
from segrd.metric import (
    LabelMetricResult,
    MetricConfig,
    delta,
    delta_human,
    evaluate_pair,
    pair_labels,
)
from segrd.quantize import QuantizeConfig, oracle_segment, quantize_geometry
from segrd.rate import RatePreset, RateReport, get_preset, preset_table, throughput
from segrd.report import RdRecord, aggregate, emit
from segrd.spatial import NnMap, SpatialIndex, brute_force_nearest, build_index, nearest_map

__version__ = "0.1.0"
