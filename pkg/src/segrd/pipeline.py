"""Batch evaluation: quantizer sweeps and externally compressed sequences."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from segrd.errors import EmptyInput, IoError, SegRdError
from segrd.kitti import LabeledCloud, ScanPair, load_scan
from segrd.metric import LabelMetricResult, MetricConfig, evaluate_pair
from segrd.quantize import QuantizeConfig, oracle_segment, quantize_geometry
from segrd.rate import DEFAULT_FPS, PROXY_BYTES_PER_POINT, RatePreset, throughput
from segrd.report import RdRecord, aggregate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepConfig:
    presets: tuple  # of RatePreset
    metric: MetricConfig = MetricConfig()
    merge_duplicates: bool = True
    dequantize: bool = True
    mode: str = "pooled"
    fps: float = DEFAULT_FPS


def degrade(reference: LabeledCloud, preset: RatePreset, merge_duplicates=True, dequantize=True) -> LabeledCloud:
    """Quantize at the preset's QS and relabel with the oracle segmenter.

    The NoCompression row stands for the untouched source, so it is returned as is.
    """
    if preset.lossless:
        return reference
    geom = quantize_geometry(reference, QuantizeConfig(preset.qs, merge_duplicates, dequantize))
    return oracle_segment(geom, reference)


def _sweep_one(args) -> list[tuple[list[LabelMetricResult], int]]:
    scan_path, label_path, cfg = args
    reference = load_scan(scan_path, label_path)
    out = []
    for preset in cfg.presets:
        degraded = degrade(reference, preset, cfg.merge_duplicates, cfg.dequantize)
        results = evaluate_pair(ScanPair(reference, degraded), cfg.metric)
        out.append((results, len(degraded) * PROXY_BYTES_PER_POINT))
    return out


def _guarded(fn: Callable, task):
    try:
        return True, fn(task)
    except SegRdError as exc:
        return False, exc


def _run(fn: Callable, tasks: list, jobs: Optional[int]):
    """Apply fn to every task; report every failing task, then raise the first failure."""
    jobs = jobs or os.cpu_count() or 1
    call = partial(_guarded, fn)
    if jobs == 1 or len(tasks) <= 1:
        outcomes = [call(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            # map() yields in submission order, so results do not depend on scheduling
            outcomes = list(pool.map(call, tasks))
    failures = [value for ok, value in outcomes if not ok]
    for exc in failures:
        log.error("%s", exc)
    if failures:
        raise failures[0]
    return [value for _, value in outcomes]


def rd_sweep(
    pairs: Sequence[tuple],
    cfg: SweepConfig,
    jobs: Optional[int] = None,
    class_map: Optional[dict] = None,
) -> list[RdRecord]:
    """Quantize -> oracle-segment -> evaluate every scan at every preset.

    Throughput is a proxy rate: 16 bytes per surviving point.
    """
    if not pairs:
        raise EmptyInput("no scans to process")
    log.info("sweeping %d scans over %d presets", len(pairs), len(cfg.presets))
    per_scan = _run(_sweep_one, [(s, l, cfg) for s, l in pairs], jobs)
    records = []
    for k, preset in enumerate(cfg.presets):
        results = [scan[k][0] for scan in per_scan]
        total = sum(scan[k][1] for scan in per_scan)
        rate = throughput(total, len(per_scan), cfg.fps).throughput_mb_s
        records += aggregate(results, cfg.mode, cfg.metric, preset.name, rate, class_map)
    return records


def _compare_one(args) -> list[LabelMetricResult]:
    ref_scan, ref_label, deg_scan, deg_label, metric = args
    pair = ScanPair(load_scan(ref_scan, ref_label), load_scan(deg_scan, deg_label))
    return evaluate_pair(pair, metric)


def compare_files(ref_scan, ref_label, deg_scan, deg_label, metric: MetricConfig) -> list[LabelMetricResult]:
    return _compare_one((ref_scan, ref_label, deg_scan, deg_label, metric))


def compare_sequences(
    ref_pairs: Sequence[tuple],
    deg_pairs: Sequence[tuple],
    metric: MetricConfig,
    jobs: Optional[int] = None,
) -> list[list[LabelMetricResult]]:
    """Evaluate reference/degraded scans matched by file stem, in reference order."""
    deg_by_stem = {Path(s).stem: (s, l) for s, l in deg_pairs}
    tasks = []
    for ref_scan, ref_label in ref_pairs:
        stem = Path(ref_scan).stem
        if stem not in deg_by_stem:
            raise IoError(f"{ref_scan}: no degraded scan with stem {stem}")
        deg_scan, deg_label = deg_by_stem[stem]
        tasks.append((ref_scan, ref_label, deg_scan, deg_label, metric))
    if not tasks:
        raise EmptyInput("no scans to compare")
    return _run(_compare_one, tasks, jobs)


def manifest_throughput(manifest: dict, scan_ids: Iterable[str], fps: float = DEFAULT_FPS) -> float:
    ids = list(scan_ids)
    missing = [s for s in ids if s not in manifest]
    if missing:
        raise IoError(f"rate manifest has no entry for scan(s): {', '.join(missing[:5])}")
    return throughput(sum(manifest[s] for s in ids), len(ids), fps).throughput_mb_s
