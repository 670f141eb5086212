"""Write a synthetic Semantic-KITTI-style sequence (velodyne/ + labels/)."""

import argparse

from segrd.synthetic import write_sequence

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    ap.add_argument("--scans", type=int, default=10)
    ap.add_argument("--points", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    root = write_sequence(args.out, args.scans, args.points, args.seed)
    print(f"wrote {args.scans} scans to {root}")
