"""Exact directed nearest-neighbor matching between two clouds.

Both the accelerated path and the brute-force oracle compare squared
distances computed in float64 with the same expression, and break ties
toward the smallest target index, so their outputs are bitwise identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from segrd.errors import EmptyCloud

# Candidates fetched per query before falling back to a radius search.
_K_CANDIDATES = 4
# Slack on the radius search so kd-tree rounding never drops an exact tie.
_REL_SLACK = 1e-9
_ABS_SLACK = 1e-12
_BRUTE_CHUNK_ELEMS = 4_000_000


@dataclass(frozen=True, eq=False)
class NnMap:
    target_index: np.ndarray
    distance: np.ndarray

    def __len__(self) -> int:
        return len(self.target_index)


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return pts.reshape(0, 3)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"expected an (N, 3) array, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    return np.ascontiguousarray(pts)


def _sq_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = a - b
    return d[..., 0] * d[..., 0] + d[..., 1] * d[..., 1] + d[..., 2] * d[..., 2]


class SpatialIndex:
    """Immutable kd-tree over a fixed set of points."""

    def __init__(self, points):
        pts = _as_points(points)
        if len(pts) == 0:
            raise EmptyCloud("cannot index an empty cloud")
        pts.setflags(write=False)
        self.points = pts
        self._tree = cKDTree(pts)

    def __len__(self) -> int:
        return len(self.points)

    def query(self, reference) -> NnMap:
        ref = _as_points(reference)
        n = len(self.points)
        if len(ref) == 0:
            return NnMap(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.float64))

        k = min(_K_CANDIDATES, n)
        kd_dist, cand = self._tree.query(ref, k=k)
        kd_dist = kd_dist.reshape(len(ref), k)
        cand = cand.reshape(len(ref), k)

        sq = _sq_dist(ref[:, None, :], self.points[cand])
        best_sq = sq.min(axis=1)
        target = np.where(sq == best_sq[:, None], cand, n).min(axis=1)

        # If the k-th candidate is within tie range, there may be more equidistant
        # points outside the candidate set: redo those exhaustively by radius.
        if k < n:
            radius = np.sqrt(best_sq) * (1.0 + _REL_SLACK) + _ABS_SLACK
            redo = np.flatnonzero(kd_dist[:, -1] <= radius)
            if len(redo):
                balls = self._tree.query_ball_point(ref[redo], r=radius[redo])
                for row, ball in zip(redo, balls):
                    ball = np.asarray(ball, dtype=np.int64)
                    bsq = _sq_dist(ref[row], self.points[ball])
                    m = bsq.min()
                    best_sq[row] = m
                    target[row] = ball[bsq == m].min()

        return NnMap(target.astype(np.int64), np.sqrt(best_sq))


def build_index(points) -> SpatialIndex:
    return SpatialIndex(points)


def nearest_map(reference, index: SpatialIndex) -> NnMap:
    """Map every reference point to its nearest indexed point (smallest index on ties)."""
    return index.query(reference)


def brute_force_nearest(reference, degraded) -> NnMap:
    """Exhaustive O(|reference| * |degraded|) nearest-neighbor scan."""
    deg = _as_points(degraded)
    if len(deg) == 0:
        raise EmptyCloud("degraded cloud is empty")
    ref = _as_points(reference)
    target = np.zeros(len(ref), dtype=np.int64)
    best_sq = np.zeros(len(ref), dtype=np.float64)
    step = max(1, _BRUTE_CHUNK_ELEMS // len(deg))
    for lo in range(0, len(ref), step):
        sq = _sq_dist(ref[lo:lo + step, None, :], deg[None, :, :])
        # argmin returns the first minimum, i.e. the smallest index on ties
        j = sq.argmin(axis=1)
        target[lo:lo + step] = j
        best_sq[lo:lo + step] = sq[np.arange(len(j)), j]
    return NnMap(target, np.sqrt(best_sq))
