"""Command-line interface.

    segrd compare REF.bin REF.label DEG.bin DEG.label
    segrd quantize IN.bin OUT.bin --preset R03 [--labels IN.label]
    segrd rd-sweep SEQ_DIR --presets R01,R03,R06 --limit 101
    segrd report REF_SEQ_DIR DEG_SEQ_DIR --rate-manifest bytes.json --rate-point R03

Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from segrd.errors import SegRdError, UsageError
from segrd.kitti import enumerate_sequence, load_scan, save_scan
from segrd.metric import MetricConfig
from segrd.pipeline import SweepConfig, compare_files, compare_sequences, manifest_throughput, rd_sweep
from segrd.quantize import QuantizeConfig, quantize_geometry
from segrd.rate import DEFAULT_FPS, PRESET_NAMES, get_preset
from segrd.report import MODES, aggregate, emit, load_class_map, load_rate_manifest

log = logging.getLogger("segrd")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _add_metric_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_float_list, default=[1.0],
                   help="human-error weight; a comma list writes one output per value (default 1)")
    p.add_argument("--human-labels", type=_int_list, default=[30],
                   help="semantic ids treated as human (default 30)")
    p.add_argument("--mode", choices=MODES, default="pooled", help="aggregation over scans")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, help="output file (default stdout)")
    p.add_argument("--class-map", type=Path, help="file of '<id>,<name>' lines")
    p.add_argument("--jobs", type=_positive_int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--fps", type=float, default=DEFAULT_FPS, help="capture rate for throughput (default 10)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="segrd", description=__doc__.split("\n\n")[0] if __doc__ else None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compare", help="evaluate one reference/degraded scan pair")
    p.add_argument("ref_scan", type=Path)
    p.add_argument("ref_labels", type=Path)
    p.add_argument("deg_scan", type=Path)
    p.add_argument("deg_labels", type=Path)
    p.add_argument("--rate-manifest", type=Path, help="JSON [{scan_id, bitstream_bytes}] keyed by scan stem")
    p.add_argument("--rate-point", default="custom", help="tag written in the rate_point column")
    _add_metric_args(p)

    p = sub.add_parser("quantize", help="quantize scan geometry by a QS value or preset")
    p.add_argument("in_scan", type=Path)
    p.add_argument("out_scan", type=Path)
    p.add_argument("--labels", type=Path, help="input label file carried to the output")
    p.add_argument("--out-labels", type=Path, help="output label file (default: OUT with .label suffix)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--qs", type=float)
    g.add_argument("--preset", choices=PRESET_NAMES)
    p.add_argument("--no-merge", action="store_true", help="keep points that share a cell")
    p.add_argument("--no-dequantize", action="store_true", help="write integer cell coordinates")

    p = sub.add_parser("rd-sweep", help="quantizer + oracle segmenter sweep over rate presets")
    p.add_argument("sequence", type=Path)
    p.add_argument("--presets", default=",".join(PRESET_NAMES), help="comma list of preset names")
    p.add_argument("--limit", type=_positive_int, help="first N scans in lexical order")
    p.add_argument("--no-merge", action="store_true")
    p.add_argument("--no-dequantize", action="store_true")
    _add_metric_args(p)

    p = sub.add_parser("report", help="evaluate an externally compressed sequence against its reference")
    p.add_argument("ref_sequence", type=Path)
    p.add_argument("deg_sequence", type=Path)
    p.add_argument("--limit", type=_positive_int)
    p.add_argument("--rate-manifest", type=Path)
    p.add_argument("--rate-point", default="custom")
    _add_metric_args(p)
    return parser


def _metric_configs(args) -> list[MetricConfig]:
    return [MetricConfig(a, frozenset(args.human_labels)) for a in args.alpha]


def _alpha_path(out: Path, alpha: float) -> Path:
    return out.with_name(f"{out.stem}.alpha-{alpha:g}{out.suffix}")


def _write(args, per_alpha: list) -> None:
    """per_alpha: list of (alpha, records)."""
    if len(per_alpha) == 1:
        emit(per_alpha[0][1], args.format, args.out if args.out else sys.stdout)
        return
    if args.out is None:
        raise UsageError("--out is required when --alpha lists several values")
    for alpha, records in per_alpha:
        path = _alpha_path(args.out, alpha)
        emit(records, args.format, path)
        log.info("wrote %s", path)


def cmd_compare(args) -> int:
    class_map = load_class_map(args.class_map) if args.class_map else None
    rate = None
    if args.rate_manifest:
        rate = manifest_throughput(load_rate_manifest(args.rate_manifest), [args.deg_scan.stem], args.fps)
    per_alpha = []
    for cfg in _metric_configs(args):
        results = compare_files(args.ref_scan, args.ref_labels, args.deg_scan, args.deg_labels, cfg)
        per_alpha.append((cfg.alpha, aggregate([results], args.mode, cfg, args.rate_point, rate, class_map)))
    _write(args, per_alpha)
    return 0


def cmd_quantize(args) -> int:
    cloud = load_scan(args.in_scan, args.labels)
    if args.preset:
        preset = get_preset(args.preset)
        if preset.lossless:
            out = cloud
        else:
            out = quantize_geometry(cloud, QuantizeConfig(preset.qs, not args.no_merge, not args.no_dequantize))
    else:
        out = quantize_geometry(cloud, QuantizeConfig(args.qs, not args.no_merge, not args.no_dequantize))
    out_labels = args.out_labels
    if out_labels is None and args.labels is not None:
        out_labels = args.out_scan.with_suffix(".label")
    save_scan(out, args.out_scan, out_labels)
    log.info("%s: %d -> %d points", args.in_scan, len(cloud), len(out))
    return 0


def cmd_rd_sweep(args) -> int:
    presets = tuple(get_preset(name.strip()) for name in args.presets.split(",") if name.strip())
    if not presets:
        raise UsageError("--presets is empty")
    pairs = enumerate_sequence(args.sequence, args.limit)
    class_map = load_class_map(args.class_map) if args.class_map else None
    per_alpha = []
    for cfg in _metric_configs(args):
        sweep = SweepConfig(presets, cfg, not args.no_merge, not args.no_dequantize, args.mode, args.fps)
        per_alpha.append((cfg.alpha, rd_sweep(pairs, sweep, args.jobs, class_map)))
    _write(args, per_alpha)
    return 0


def cmd_report(args) -> int:
    ref_pairs = enumerate_sequence(args.ref_sequence, args.limit)
    deg_pairs = enumerate_sequence(args.deg_sequence)
    class_map = load_class_map(args.class_map) if args.class_map else None
    rate = None
    if args.rate_manifest:
        stems = [s.stem for s, _ in ref_pairs]
        rate = manifest_throughput(load_rate_manifest(args.rate_manifest), stems, args.fps)
    per_alpha = []
    for cfg in _metric_configs(args):
        results = compare_sequences(ref_pairs, deg_pairs, cfg, args.jobs)
        per_alpha.append((cfg.alpha, aggregate(results, args.mode, cfg, args.rate_point, rate, class_map)))
    _write(args, per_alpha)
    return 0


COMMANDS = {
    "compare": cmd_compare,
    "quantize": cmd_quantize,
    "rd-sweep": cmd_rd_sweep,
    "report": cmd_report,
}


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except SegRdError as exc:
        print(f"segrd {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception:
        log.exception("internal error")
        return 3


if __name__ == "__main__":
    sys.exit(main())
