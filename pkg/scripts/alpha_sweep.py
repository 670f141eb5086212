"""Human-label delta versus rate for several alpha values (synthetic scenes)."""

import argparse
import tempfile

from segrd.kitti import enumerate_sequence
from segrd.metric import PERSON, MetricConfig
from segrd.pipeline import SweepConfig, rd_sweep
from segrd.rate import preset_table
from segrd.synthetic import write_sequence

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="0,0.5,1,2,10")
    ap.add_argument("--scans", type=int, default=3)
    ap.add_argument("--points", type=int, default=50_000)
    args = ap.parse_args()
    alphas = [float(a) for a in args.alphas.split(",")]
    presets = tuple(preset_table())

    table = {}
    with tempfile.TemporaryDirectory() as tmp:
        write_sequence(tmp, args.scans, args.points)
        pairs = enumerate_sequence(tmp)
        for a in alphas:
            for r in rd_sweep(pairs, SweepConfig(presets, MetricConfig(a))):
                if r.label_id == PERSON:
                    table[a, r.rate_point] = r.delta

    print(f"{'alpha':>6} " + " ".join(f"{p.name[:6]:>7}" for p in presets))
    for a in alphas:
        print(f"{a:6g} " + " ".join(f"{table.get((a, p.name), float('nan')):7.3f}" for p in presets))
