"""Directed nearest-neighbor label-mismatch metric.

Every reference point X_i is paired with its nearest degraded point Y_Xi.
For a label ``lam``:

    S   = pairs where L(X_i) == lam or L(Y_Xi) == lam
    E   = pairs in S where L(X_i) != L(Y_Xi)
    delta = |E| / |S|

For a human label, pairs where the reference is human and the match is not
(E_h) get an extra weight ``alpha``:

    delta_h = (|E| + alpha |E_h|) / (|S| + alpha |E_h|)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from segrd.errors import EmptyCloud, LengthMismatch, NegativeAlpha
from segrd.kitti import ScanPair
from segrd.spatial import NnMap, build_index, nearest_map

PERSON = 30
BICYCLIST = 31
MOTORCYCLIST = 32


@dataclass(frozen=True)
class MetricConfig:
    alpha: float = 1.0
    human_labels: frozenset = field(default_factory=lambda: frozenset({PERSON}))

    def __post_init__(self):
        if not self.alpha >= 0:
            raise NegativeAlpha(f"alpha must be >= 0, got {self.alpha}")
        object.__setattr__(self, "human_labels", frozenset(int(x) for x in self.human_labels))


@dataclass(frozen=True)
class LabelMetricResult:
    label: int
    s_count: int
    e_count: int
    eh_count: int = 0
    alpha: float = 0.0

    @property
    def fraction(self) -> Optional[Fraction]:
        """Exact value of the metric, or None when the label never occurs."""
        if self.s_count == 0:
            return None
        a = Fraction(self.alpha)
        return (self.e_count + a * self.eh_count) / (self.s_count + a * self.eh_count)

    @property
    def delta(self) -> Optional[float]:
        f = self.fraction
        return None if f is None else float(f)


def _check_pairs(pairs) -> np.ndarray:
    p = np.asarray(pairs, dtype=np.int64)
    if p.size == 0:
        return p.reshape(0, 2)
    if p.ndim != 2 or p.shape[1] != 2:
        raise ValueError(f"expected (N, 2) label pairs, got shape {p.shape}")
    return p


def pair_labels(reference, degraded, nn: NnMap) -> np.ndarray:
    """(ref_label, deg_label) for each reference point, as an (N, 2) array."""
    if len(nn) != len(reference):
        raise LengthMismatch(f"map has {len(nn)} entries for {len(reference)} reference points")
    if len(nn) and (nn.target_index.min() < 0 or nn.target_index.max() >= len(degraded)):
        raise LengthMismatch("map index out of range for the degraded cloud")
    out = np.empty((len(reference), 2), dtype=np.int64)
    out[:, 0] = reference.labels
    out[:, 1] = degraded.labels[nn.target_index]
    return out


def delta(pairs, label: int) -> LabelMetricResult:
    p = _check_pairs(pairs)
    ref, deg = p[:, 0], p[:, 1]
    in_s = (ref == label) | (deg == label)
    s = int(in_s.sum())
    e = int((in_s & (ref != deg)).sum())
    return LabelMetricResult(int(label), s, e)


def delta_human(pairs, human_label: int, alpha: float) -> LabelMetricResult:
    if not alpha >= 0:
        raise NegativeAlpha(f"alpha must be >= 0, got {alpha}")
    p = _check_pairs(pairs)
    base = delta(p, human_label)
    eh = int(((p[:, 0] == human_label) & (p[:, 1] != human_label)).sum())
    return LabelMetricResult(base.label, base.s_count, base.e_count, eh, float(alpha))


def evaluate_pairs(pairs, config: MetricConfig) -> list[LabelMetricResult]:
    p = _check_pairs(pairs)
    results = []
    for label in np.unique(p):
        label = int(label)
        if label in config.human_labels:
            results.append(delta_human(p, label, config.alpha))
        else:
            results.append(delta(p, label))
    return results


def evaluate_pair(scan_pair: ScanPair, config: MetricConfig = MetricConfig()) -> list[LabelMetricResult]:
    """Per-label results for one reference/degraded pair, sorted by label."""
    ref, deg = scan_pair.reference, scan_pair.degraded
    if len(ref) == 0 or len(deg) == 0:
        raise EmptyCloud("both clouds must be non-empty to compute the metric")
    nn = nearest_map(ref.positions, build_index(deg.positions))
    return evaluate_pairs(pair_labels(ref, deg, nn), config)
