"""Quantizer RD sweep on synthetic street scenes; prints mean delta per preset.

    python scripts/rd_trend.py --scans 5 --mode pooled
"""

import argparse
import tempfile

import numpy as np

from segrd.kitti import enumerate_sequence
from segrd.metric import MetricConfig
from segrd.pipeline import SweepConfig, rd_sweep
from segrd.rate import preset_table
from segrd.report import load_class_map
from segrd.synthetic import write_sequence


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--scans", type=int, default=5)
    ap.add_argument("--points", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", choices=("pooled", "mean"), default="pooled")
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--class-map", default="configs/semantic_kitti_classes.csv")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        write_sequence(tmp, args.scans, args.points, args.seed)
        cfg = SweepConfig(tuple(preset_table()), MetricConfig(args.alpha), mode=args.mode)
        records = rd_sweep(enumerate_sequence(tmp), cfg, class_map=load_class_map(args.class_map))

    names = sorted({r.label_name for r in records})
    print(f"{'preset':>14} {'proxy MB/s':>11} {'mean':>7} " + " ".join(f"{n[:9]:>9}" for n in names))
    for p in preset_table():
        rs = {r.label_name: r for r in records if r.rate_point == p.name}
        tp = next(iter(rs.values())).throughput_mb_s
        mean = np.mean([r.delta for r in rs.values()])
        cells = " ".join(f"{rs[n].delta:9.3f}" if n in rs else f"{'-':>9}" for n in names)
        print(f"{p.name:>14} {tp:11.4f} {mean:7.4f} {cells}")


if __name__ == "__main__":
    main()
