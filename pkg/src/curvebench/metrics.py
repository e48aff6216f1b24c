"""Evaluation criteria: bidirectional closest-point maps, Hausdorff and RMS
distance, manifoldness and exact-match classification, plus the two
ground-truth file formats."""

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import UndefinedMetricError


# ------------------------------------------------------------ ground truth

@dataclass(frozen=True)
class GroundTruth:
    """Reference edge structure, from an indexed list or ordered vertices."""

    vertices: np.ndarray
    edges: np.ndarray
    source_form: str  # "indexed" | "ordered"
    closed: bool = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 2)
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= len(v)):
            raise ValueError("ground-truth edge index out of range")
        v.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "edges", e)

    @classmethod
    def from_indexed(cls, vertices, edges):
        return cls(vertices, edges, "indexed")

    @classmethod
    def from_ordered(cls, vertices, closed):
        v = np.asarray(vertices, dtype=np.float64).reshape(-1, 2)
        n = len(v)
        pairs = [(i, i + 1) for i in range(n - 1)]
        if closed and n > 2:
            pairs.append((n - 1, 0))
        return cls(v, np.asarray(pairs, dtype=np.int64).reshape(-1, 2),
                   "ordered", closed=closed)

    def edge_set(self):
        return {(int(min(i, j)), int(max(i, j))) for i, j in self.edges}


def parse_ground_truth(path):
    with open(path) as f:
        tokens = f.read().split()
    if not tokens:
        raise ValueError(f"{path}: empty ground-truth file")
    kind = tokens[0]
    if kind == "GT-INDEXED":
        n, m = int(tokens[1]), int(tokens[2])
        vals = tokens[3:]
        if len(vals) != 2 * n + 2 * m:
            raise ValueError(f"{path}: expected {2 * n + 2 * m} values")
        verts = np.array(vals[: 2 * n], dtype=np.float64).reshape(n, 2)
        edges = np.array(vals[2 * n:], dtype=np.int64).reshape(m, 2)
        return GroundTruth.from_indexed(verts, edges)
    if kind == "GT-ORDERED":
        n = int(tokens[1])
        closed = tokens[2]
        if closed not in ("closed", "open"):
            raise ValueError(f"{path}: flag must be 'closed' or 'open'")
        vals = tokens[3:]
        if len(vals) != 2 * n:
            raise ValueError(f"{path}: expected {2 * n} coordinates")
        verts = np.array(vals, dtype=np.float64).reshape(n, 2)
        return GroundTruth.from_ordered(verts, closed == "closed")
    raise ValueError(f"{path}: unknown header {kind!r}")


def write_ground_truth(gt, path):
    with open(path, "w") as f:
        if gt.source_form == "ordered":
            flag = "closed" if gt.closed else "open"
            f.write(f"GT-ORDERED {len(gt.vertices)} {flag}\n")
            for x, y in gt.vertices:
                f.write(f"{float(x)!r} {float(y)!r}\n")
        else:
            f.write(f"GT-INDEXED {len(gt.vertices)} {len(gt.edges)}\n")
            for x, y in gt.vertices:
                f.write(f"{float(x)!r} {float(y)!r}\n")
            for i, j in gt.edges:
                f.write(f"{i} {j}\n")


# ------------------------------------------------------------- resampling

def _curve_arrays(curve):
    """(points, edges) view of a PolyCurve or GroundTruth."""
    verts = curve.vertices
    pts = verts.points if hasattr(verts, "points") else np.asarray(verts)
    return np.asarray(pts, dtype=np.float64), np.asarray(curve.edges, dtype=np.int64)


def curve_total_length(curve):
    pts, edges = _curve_arrays(curve)
    if len(edges) == 0:
        return 0.0
    return float(np.hypot(*(pts[edges[:, 0]] - pts[edges[:, 1]]).T).sum())


def resample_curve(curve, spacing):
    """Dense points along every edge at arclength steps <= spacing, always
    including both endpoints; shared endpoints are emitted once.

    Returns (points (k, 2), source edge ids (k,)).
    """
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    pts, edges = _curve_arrays(curve)
    if len(edges) == 0:
        return np.empty((0, 2)), np.empty(0, dtype=np.int64)
    out = []
    out_eid = []
    seen_vertex = set()
    for eid, (i, j) in enumerate(edges):
        a, b = pts[i], pts[j]
        length = float(np.hypot(*(b - a)))
        k = max(int(math.ceil(length / spacing)), 1)
        for v, vid in ((a, int(i)), (b, int(j))):
            if vid not in seen_vertex:
                seen_vertex.add(vid)
                out.append(v)
                out_eid.append(eid)
        t = np.arange(1, k)[:, None] / k
        if len(t):
            interior = a + t * (b - a)
            out.extend(interior)
            out_eid.extend([eid] * len(interior))
    return np.asarray(out), np.asarray(out_eid, dtype=np.int64)


# ------------------------------------------------- closest point machinery

@_accel.jit
def _closest_on_segments_loop(queries, seg_a, seg_b):
    nq = queries.shape[0]
    ns = seg_a.shape[0]
    d2 = np.empty(nq, dtype=np.float64)
    feet = np.empty((nq, 2), dtype=np.float64)
    for qi in range(nq):
        px = queries[qi, 0]
        py = queries[qi, 1]
        best = np.inf
        bfx = 0.0
        bfy = 0.0
        for si in range(ns):
            ax = seg_a[si, 0]
            ay = seg_a[si, 1]
            dx = seg_b[si, 0] - ax
            dy = seg_b[si, 1] - ay
            l2 = dx * dx + dy * dy
            if l2 > 0.0:
                t = ((px - ax) * dx + (py - ay) * dy) / l2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            else:
                t = 0.0
            fx = ax + t * dx
            fy = ay + t * dy
            dd = (px - fx) ** 2 + (py - fy) ** 2
            if dd < best:
                best = dd
                bfx = fx
                bfy = fy
        d2[qi] = best
        feet[qi, 0] = bfx
        feet[qi, 1] = bfy
    return d2, feet


def _closest_on_segments_numpy(queries, seg_a, seg_b):
    nq = len(queries)
    d2 = np.empty(nq)
    feet = np.empty((nq, 2))
    dseg = seg_b - seg_a
    l2 = (dseg ** 2).sum(axis=1)
    safe = np.where(l2 > 0.0, l2, 1.0)
    for qi in range(nq):
        p = queries[qi]
        t = ((p - seg_a) * dseg).sum(axis=1) / safe
        t = np.where(l2 > 0.0, np.clip(t, 0.0, 1.0), 0.0)
        f = seg_a + t[:, None] * dseg
        dd = ((p - f) ** 2).sum(axis=1)
        k = int(dd.argmin())
        d2[qi] = dd[k]
        feet[qi] = f[k]
    return d2, feet


@dataclass(frozen=True)
class CorrespondenceMap:
    """Samples on one curve with their closest points on the other."""

    sources: np.ndarray
    feet: np.ndarray
    dist2: np.ndarray

    @property
    def distances(self):
        return np.sqrt(self.dist2)

    def __len__(self):
        return len(self.sources)


def _segments(curve):
    pts, edges = _curve_arrays(curve)
    if len(edges) == 0:
        raise UndefinedMetricError("curve has no edges; metric undefined")
    return pts[edges[:, 0]], pts[edges[:, 1]]


def default_spacing(c1, c2):
    """(shorter curve length) / 1000, floored at 1e-6 of the joint bbox
    diagonal."""
    l1, l2 = curve_total_length(c1), curve_total_length(c2)
    if min(l1, l2) == 0.0:
        raise UndefinedMetricError("curve has no edges; metric undefined")
    p1, _ = _curve_arrays(c1)
    p2, _ = _curve_arrays(c2)
    allp = np.vstack([p1, p2])
    diag = float(np.hypot(*(allp.max(axis=0) - allp.min(axis=0))))
    return max(min(l1, l2) / 1000.0, 1e-6 * diag)


def _identical_geometry(c1, c2):
    p1, e1 = _curve_arrays(c1)
    p2, e2 = _curve_arrays(c2)
    if p1.shape != p2.shape or not np.array_equal(p1, p2):
        return False
    canon = lambda e: {(int(min(i, j)), int(max(i, j))) for i, j in e}
    return canon(e1) == canon(e2)


def closest_point_maps(c1, c2, spacing=None):
    """Both directed closest-point maps between two curves.

    Samples are taken on each curve with :func:`resample_curve`; every
    sample maps to its closest point on the other curve's segments (the
    continuous polyline, not the opposing sample set).  Bitwise-identical
    curves short-circuit to all-zero distances, so self-distance is exactly
    zero rather than projection roundoff.
    """
    if spacing is None:
        spacing = default_spacing(c1, c2)
    a1, b1 = _segments(c1)
    a2, b2 = _segments(c2)
    s1, _ = resample_curve(c1, spacing)
    s2, _ = resample_curve(c2, spacing)
    if _identical_geometry(c1, c2):
        return (CorrespondenceMap(s1, s1.copy(), np.zeros(len(s1))),
                CorrespondenceMap(s2, s2.copy(), np.zeros(len(s2))))
    if _accel.use_numba():
        d2_fwd, feet_fwd = _closest_on_segments_loop(s1, a2, b2)
        d2_rev, feet_rev = _closest_on_segments_loop(s2, a1, b1)
    else:
        d2_fwd, feet_fwd = _closest_on_segments_numpy(s1, a2, b2)
        d2_rev, feet_rev = _closest_on_segments_numpy(s2, a1, b1)
    return (CorrespondenceMap(s1, feet_fwd, d2_fwd),
            CorrespondenceMap(s2, feet_rev, d2_rev))


def hausdorff(c1, c2, spacing=None):
    """Symmetric Hausdorff distance estimated over both correspondence maps."""
    fwd, rev = closest_point_maps(c1, c2, spacing)
    return float(np.sqrt(max(fwd.dist2.max(), rev.dist2.max())))


def rms(c1, c2, spacing=None):
    """Root mean square correspondence distance over both maps combined."""
    fwd, rev = closest_point_maps(c1, c2, spacing)
    n = len(fwd) + len(rev)
    mean = (fwd.dist2.sum() + rev.dist2.sum()) / n
    # the mean cannot exceed the max; clamp the rounding of the summation so
    # rms <= hausdorff holds exactly
    mean = min(mean, max(fwd.dist2.max(), rev.dist2.max()))
    return float(np.sqrt(mean))


def hausdorff_and_rms(c1, c2, spacing=None):
    fwd, rev = closest_point_maps(c1, c2, spacing)
    peak = max(fwd.dist2.max(), rev.dist2.max())
    n = len(fwd) + len(rev)
    mean = min((fwd.dist2.sum() + rev.dist2.sum()) / n, peak)
    return float(np.sqrt(peak)), float(np.sqrt(mean))


# ------------------------------------------------------- classification

def is_manifold(curve):
    """(manifold?, number of open endpoints): manifold means every vertex
    has at most two incident edges; degree-1 vertices are open endpoints."""
    pts, edges = _curve_arrays(curve)
    deg = np.zeros(len(pts), dtype=np.int64)
    if len(edges):
        np.add.at(deg, edges.ravel(), 1)
    return bool(deg.max(initial=0) <= 2), int((deg == 1).sum())


def exact_match(curve, gt):
    """Edge-set identity between a reconstruction and its ground truth
    (both canonicalized to undirected index pairs)."""
    pts, _ = _curve_arrays(curve)
    if len(pts) != len(gt.vertices):
        raise ValueError(
            f"vertex spaces differ: {len(pts)} vs {len(gt.vertices)}")
    mine = {(int(min(i, j)), int(max(i, j))) for i, j in curve.edges}
    return mine == gt.edge_set()


@dataclass(frozen=True)
class MetricsReport:
    """Evaluation of one (input, algorithm) pair; distance fields are None
    when no ground truth was available."""

    hausdorff: float
    rms: float
    manifold: bool
    open_endpoint_count: int
    exact: bool
    runtime_seconds: float

    def __post_init__(self):
        if self.hausdorff is not None and self.rms is not None:
            if self.rms > self.hausdorff:
                raise ValueError("rms exceeds hausdorff")
            if self.rms < 0 or self.hausdorff < 0:
                raise ValueError("negative distance")
