"""Synthetic labeled street scenes for desk-scale experiments."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from segrd.kitti import LabeledCloud, save_scan

CAR, PERSON, ROAD, SIDEWALK, BUILDING, VEGETATION, TERRAIN, POLE = 10, 30, 40, 48, 50, 70, 72, 80
GROUND_Z = -1.7


def _plane(rng, n, x, y, z):
    pts = np.column_stack([rng.uniform(*x, n), rng.uniform(*y, n), np.full(n, z)])
    pts[:, 2] += rng.normal(0, 0.02, n)
    return pts


def _box(rng, n, center, size):
    # points on the surface of an axis-aligned box
    u = rng.uniform(-0.5, 0.5, (n, 3)) * size
    face = rng.integers(0, 3, n)
    side = rng.choice([-0.5, 0.5], n)
    u[np.arange(n), face] = side * np.asarray(size)[face]
    return u + center


def _cylinder(rng, n, center, radius, height):
    t = rng.uniform(0, 2 * np.pi, n)
    return np.column_stack([
        center[0] + radius * np.cos(t),
        center[1] + radius * np.sin(t),
        center[2] + rng.uniform(0, height, n),
    ])


def _blob(rng, n, center, radius):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return center + v * radius * rng.uniform(0.7, 1.0, (n, 1))


def street_scene(n_points: int = 50_000, seed: int = 0, length: float = 120.0) -> LabeledCloud:
    """A straight street centred on the sensor, with cars, pedestrians and buildings.

    Point budget is split roughly by surface area; the total is exactly ``n_points``.
    """
    rng = np.random.default_rng(seed)
    half = length / 2
    parts = []

    def add(label, pts):
        parts.append((pts, np.full(len(pts), label)))

    share = lambda f: max(1, int(round(f * n_points)))
    add(ROAD, _plane(rng, share(0.28), (-half, half), (-4, 4), GROUND_Z))
    for sgn in (-1, 1):
        add(SIDEWALK, _plane(rng, share(0.07), (-half, half), sorted((sgn * 4, sgn * 7)), GROUND_Z + 0.15))
        add(TERRAIN, _plane(rng, share(0.05), (-half, half), sorted((sgn * 7, sgn * 11)), GROUND_Z + 0.05))
        wall = _plane(rng, share(0.09), (-half, half), (0, 1), 0)
        wall[:, 1] = sgn * 13 + rng.normal(0, 0.02, len(wall))
        wall[:, 2] = rng.uniform(GROUND_Z, GROUND_Z + 10, len(wall))
        add(BUILDING, wall)

    n_cars, n_people, n_trees, n_poles = 8, 10, 8, 8
    for _ in range(n_cars):
        c = (rng.uniform(-half + 5, half - 5), rng.choice([-2.0, 2.0]), GROUND_Z + 0.8)
        add(CAR, _box(rng, share(0.12 / n_cars), c, (4.2, 1.8, 1.5)))
    for _ in range(n_people):
        c = (rng.uniform(-half + 2, half - 2), rng.choice([-1, 1]) * rng.uniform(4.5, 6.5), GROUND_Z + 0.15)
        add(PERSON, _cylinder(rng, share(0.06 / n_people), c, 0.25, 1.75))
    for _ in range(n_trees):
        c = (rng.uniform(-half + 3, half - 3), rng.choice([-1, 1]) * rng.uniform(8, 10.5), GROUND_Z + 4)
        add(VEGETATION, _blob(rng, share(0.12 / n_trees), c, 2.0))
    for _ in range(n_poles):
        c = (rng.uniform(-half, half), rng.choice([-1, 1]) * 6.8, GROUND_Z + 0.15)
        add(POLE, _cylinder(rng, share(0.02 / n_poles), c, 0.1, 6.0))

    pts = np.concatenate([p for p, _ in parts])
    lab = np.concatenate([l for _, l in parts])
    if len(pts) < n_points:
        extra = _plane(rng, n_points - len(pts), (-half, half), (-4, 4), GROUND_Z)
        pts = np.concatenate([pts, extra])
        lab = np.concatenate([lab, np.full(len(extra), ROAD)])
    # trim to the exact budget, shuffled like a real scan order
    order = rng.choice(len(pts), n_points, replace=False)
    pts, lab = pts[order], lab[order]
    refl = np.clip(rng.normal(0.3, 0.1, n_points), 0, 1)
    return LabeledCloud.from_arrays(pts, labels=lab, reflectance=refl)


def write_sequence(directory, n_scans: int, n_points: int = 50_000, seed: int = 0) -> Path:
    """Write ``n_scans`` scenes as a ``velodyne/``+``labels/`` sequence directory."""
    root = Path(directory)
    (root / "velodyne").mkdir(parents=True, exist_ok=True)
    (root / "labels").mkdir(parents=True, exist_ok=True)
    for i in range(n_scans):
        cloud = street_scene(n_points, seed=seed + i)
        save_scan(cloud, root / "velodyne" / f"{i:06d}.bin", root / "labels" / f"{i:06d}.label")
    return root
