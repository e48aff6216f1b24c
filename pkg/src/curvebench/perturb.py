"""Input corruption models: uniform displacement, feature-size-proportional
normal displacement, and outlier injection.

All three draw from a PCG64 generator seeded by their parameter object, so
an (input, seed) pair reproduces bit-identically across platforms.  Ground-truth edge
structure is never touched: metrics compare reconstructions of corrupted
points against the uncorrupted reference geometry.
"""

from dataclasses import dataclass

import numpy as np

from .geom import PointSet

_MAX_REDRAWS = 100


@dataclass(frozen=True)
class NoiseSpec:
    """kind 'uniform': delta is a fraction of the bbox diagonal; kind 'lfs':
    delta is a fraction of each point's local feature size."""

    kind: str
    delta: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("uniform", "lfs"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not self.delta >= 0:
            raise ValueError(f"delta must be nonnegative, got {self.delta}")


@dataclass(frozen=True)
class OutlierSpec:
    percent: float
    seed: int = 0

    def __post_init__(self):
        if not self.percent >= 0:
            raise ValueError(f"percent must be nonnegative, got {self.percent}")


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def _dedupe_redraw(pts, redraw, rng):
    """Re-draw points that landed exactly on another until all distinct."""
    for _ in range(_MAX_REDRAWS):
        seen = {}
        clash = []
        for i, row in enumerate(map(tuple, pts)):
            if row in seen:
                clash.append(i)
            else:
                seen[row] = i
        if not clash:
            return pts
        for i in clash:
            pts[i] = redraw(i, rng)
    raise RuntimeError("could not separate coincident points after redraws")


def uniform_noise(ps, spec):
    """Displace each point by sigma * diag in a uniformly random direction,
    sigma uniform in [0, delta]; diag is the input bbox diagonal."""
    if spec.kind != "uniform":
        raise ValueError("uniform_noise needs a NoiseSpec of kind 'uniform'")
    if len(ps) < 1:
        raise ValueError("empty point set")
    if spec.delta == 0:
        return PointSet(ps.points)
    diag = ps.bbox_diagonal
    rng = _rng(spec.seed)
    sigma = rng.uniform(0.0, spec.delta, len(ps)) * diag
    phi = rng.uniform(0.0, 2.0 * np.pi, len(ps))
    out = ps.points + sigma[:, None] * np.stack([np.cos(phi), np.sin(phi)], 1)

    def redraw(i, rng):
        s = rng.uniform(0.0, spec.delta) * diag
        a = rng.uniform(0.0, 2.0 * np.pi)
        return ps.points[i] + s * np.array([np.cos(a), np.sin(a)])

    return PointSet(_dedupe_redraw(out, redraw, rng))


def lfs_noise(ps, spec):
    """Displace each point along its unit normal by sigma uniform in
    [-delta * lfs, +delta * lfs]; keeps the sampling density along the curve
    unchanged.  Requires normals/lfs provenance from the epsilon sampler."""
    if spec.kind != "lfs":
        raise ValueError("lfs_noise needs a NoiseSpec of kind 'lfs'")
    if not ps.has_sampling_provenance():
        raise ValueError("point set carries no normals/lfs provenance")
    if spec.delta == 0:
        return PointSet(ps.points)
    rng = _rng(spec.seed)
    bound = spec.delta * ps.lfs
    sigma = rng.uniform(-1.0, 1.0, len(ps)) * bound
    out = ps.points + sigma[:, None] * ps.normals

    def redraw(i, rng):
        s = rng.uniform(-1.0, 1.0) * bound[i]
        return ps.points[i] + s * ps.normals[i]

    return PointSet(_dedupe_redraw(out, redraw, rng))


def add_outliers(ps, spec):
    """Append round(percent/100 * n) points uniform in the input bbox; the
    original points keep their indices."""
    if len(ps) < 2:
        raise ValueError("need at least 2 points for a bounding box")
    (x0, y0), (x1, y1) = ps.bbox
    if x1 - x0 == 0.0 or y1 - y0 == 0.0:
        raise ValueError("degenerate bounding box (zero area)")
    count = int(np.floor(spec.percent / 100.0 * len(ps) + 0.5))
    if count == 0:
        return PointSet(ps.points)
    rng = _rng(spec.seed)
    extra = np.stack([rng.uniform(x0, x1, count), rng.uniform(y0, y1, count)], 1)
    out = np.vstack([ps.points, extra])

    def redraw(i, rng):
        if i < len(ps):
            raise RuntimeError("existing point flagged for redraw")
        return np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])

    return PointSet(_dedupe_redraw(out, redraw, rng))
