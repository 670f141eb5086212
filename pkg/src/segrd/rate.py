"""Rate points and throughput accounting."""

from __future__ import annotations

from dataclasses import dataclass

from segrd.errors import UsageError, ZeroFrames

DEFAULT_FPS = 10.0
BYTES_PER_MB = 10**6
PROXY_BYTES_PER_POINT = 16


@dataclass(frozen=True)
class RatePreset:
    name: str
    qs: float
    ref_throughput_gpcc: float
    ref_throughput_l3c2: float

    @property
    def lossless(self) -> bool:
        return self.name == "NoCompression"


# name, QS, reference G-PCC MB/s, reference L3C2 MB/s
_TABLE = (
    RatePreset("R01", 0.0019, 0.0408, 0.1661),
    RatePreset("R02", 0.0039, 0.1102, 0.4125),
    RatePreset("R03", 0.0160, 0.5729, 1.7662),
    RatePreset("R04", 0.0310, 1.0965, 2.7951),
    RatePreset("R05", 0.1300, 2.2189, 4.2298),
    RatePreset("R06", 0.2500, 2.8484, 4.8205),
    RatePreset("NoCompression", 1.0000, 28.7465, 28.7465),
)
PRESET_NAMES = tuple(p.name for p in _TABLE)


def preset_table() -> list[RatePreset]:
    return list(_TABLE)


def get_preset(name: str) -> RatePreset:
    for p in _TABLE:
        if p.name.lower() == name.lower():
            return p
    raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")


def rate_order(name: str) -> tuple[int, str]:
    """Sort key: presets in table order, custom tags after them by name."""
    try:
        return (PRESET_NAMES.index(name), "")
    except ValueError:
        return (len(PRESET_NAMES), name)


@dataclass(frozen=True)
class RateReport:
    total_bytes: int
    frame_count: int
    fps: float
    throughput_mb_s: float


def throughput(total_bytes: int, frame_count: int, fps: float = DEFAULT_FPS) -> RateReport:
    if frame_count <= 0:
        raise ZeroFrames(f"frame_count must be positive, got {frame_count}")
    if not fps > 0:
        raise UsageError(f"fps must be positive, got {fps}")
    mb_s = total_bytes * fps / (frame_count * BYTES_PER_MB)
    return RateReport(int(total_bytes), int(frame_count), float(fps), mb_s)
