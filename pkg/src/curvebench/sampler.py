"""Benchmark input generation.

Two families of tools live here:

* the smooth-curve pipeline: densely sample a cubic Bezier chain, estimate
  the medial axis with shrinking tangent disks, derive the local feature
  size (lfs), and pick a feature-adaptive subset whose spacing stays below
  ``eps * lfs`` together with its ground-truth polygon;
* the raster pipeline: extract the 8-neighborhood boundary of a binary
  image and thin it with randomized dart throwing at erase radius r.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import _accel
from .errors import DegenerateInputError
from .geom import PointSet
from .metrics import GroundTruth


# ------------------------------------------------------------- bezier spec

@dataclass(frozen=True)
class BezierCurveSpec:
    """Chain of cubic segments, each a (4, 2) control quadruple.

    Consecutive segments must share endpoints exactly; a closed spec also
    joins the last endpoint back to the first start point.
    """

    segments: np.ndarray
    closed: bool

    def __post_init__(self):
        seg = np.asarray(self.segments, dtype=np.float64).reshape(-1, 4, 2)
        if len(seg) == 0:
            raise ValueError("empty Bezier spec")
        if not np.all(np.isfinite(seg)):
            raise ValueError("non-finite control point")
        for i in range(len(seg) - 1):
            if not np.array_equal(seg[i, 3], seg[i + 1, 0]):
                raise ValueError(f"segments {i} and {i + 1} do not share an endpoint")
        if self.closed and not np.array_equal(seg[-1, 3], seg[0, 0]):
            raise ValueError("closed spec must end where it starts")
        seg.setflags(write=False)
        object.__setattr__(self, "segments", seg)


@dataclass(frozen=True)
class SamplingSpec:
    """Parameters of the feature-adaptive sampler."""

    epsilon: float
    dense_resolution: int = 256
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.dense_resolution < 64:
            raise ValueError("dense_resolution must be at least 64")


@dataclass(frozen=True)
class DenseCurveSample:
    """Dense parametric samples with unit normals and, once computed, lfs."""

    samples: np.ndarray
    normals: np.ndarray
    closed: bool
    lfs: np.ndarray = None


@dataclass(frozen=True)
class MedialApprox:
    points: np.ndarray


def load_bezier_spec(path):
    """Text format: first line 'closed' or 'open', then one line per segment
    holding 8 reals x0 y0 x1 y1 x2 y2 x3 y3."""
    with open(path) as f:
        lines = [ln.strip() for ln in f
                 if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0] not in ("closed", "open"):
        raise ValueError(f"{path}: first line must be 'closed' or 'open'")
    segs = []
    for ln in lines[1:]:
        vals = [float(v) for v in ln.split()]
        if len(vals) != 8:
            raise ValueError(f"{path}: segment line needs 8 reals, got {len(vals)}")
        segs.append(np.array(vals).reshape(4, 2))
    return BezierCurveSpec(np.array(segs), closed=lines[0] == "closed")


def save_bezier_spec(spec, path):
    with open(path, "w") as f:
        f.write("closed\n" if spec.closed else "open\n")
        for seg in spec.segments:
            f.write(" ".join(repr(float(v)) for v in seg.ravel()) + "\n")


# ------------------------------------------------------ curve constructors

_CIRCLE_HANDLE = 4.0 / 3.0 * (np.sqrt(2.0) - 1.0)  # cubic quarter-arc handle


def circle_spec(radius=1.0, center=(0.0, 0.0), segments=4):
    """Closed cubic approximation of a circle (max radial error ~2.7e-4 of
    the radius at 4 segments, dropping fast with more)."""
    if segments < 3:
        raise ValueError("need at least 3 segments")
    th = np.linspace(0.0, 2.0 * np.pi, segments + 1)
    k = 4.0 / 3.0 * np.tan(np.pi / (2.0 * segments))
    pts = np.stack([np.cos(th), np.sin(th)], axis=1)
    tans = np.stack([-np.sin(th), np.cos(th)], axis=1)
    segs = []
    for i in range(segments):
        p0, p3 = pts[i], pts[i + 1]
        segs.append([p0, p0 + k * tans[i], p3 - k * tans[i + 1], p3])
    segs = np.asarray(segs) * radius + np.asarray(center)
    segs[-1, 3] = segs[0, 0]
    for i in range(segments - 1):
        segs[i + 1, 0] = segs[i, 3]
    return BezierCurveSpec(segs, closed=True)


def ellipse_spec(a, b, segments=8):
    """Closed cubic approximation of an axis-aligned ellipse."""
    spec = circle_spec(1.0, (0.0, 0.0), segments)
    segs = spec.segments * np.array([a, b])
    return BezierCurveSpec(segs, closed=True)


def catmull_rom_spec(points, closed=True):
    """C1 cubic chain through the given points (uniform Catmull-Rom)."""
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    if n < 3:
        raise ValueError("need at least 3 points")
    if closed:
        prev = np.roll(pts, 1, axis=0)
        nxt = np.roll(pts, -1, axis=0)
        tang = (nxt - prev) / 2.0
        segs = []
        for i in range(n):
            j = (i + 1) % n
            segs.append([pts[i], pts[i] + tang[i] / 3.0,
                         pts[j] - tang[j] / 3.0, pts[j]])
    else:
        tang = np.empty_like(pts)
        tang[1:-1] = (pts[2:] - pts[:-2]) / 2.0
        tang[0] = pts[1] - pts[0]
        tang[-1] = pts[-1] - pts[-2]
        segs = []
        for i in range(n - 1):
            segs.append([pts[i], pts[i] + tang[i] / 3.0,
                         pts[i + 1] - tang[i + 1] / 3.0, pts[i + 1]])
    return BezierCurveSpec(np.asarray(segs), closed=closed)


def random_blob_spec(seed, n_ctrl=14, wobble=0.35, min_radius=0.55):
    """Random smooth closed star-shaped curve for synthetic corpora.

    The radius profile is a short random Fourier series clamped away from
    zero, so the curve is simple and its feature size stays workable.
    """
    rng = np.random.default_rng(seed)
    th = np.linspace(0.0, 2.0 * np.pi, n_ctrl, endpoint=False)
    r = np.ones(n_ctrl)
    for k in range(2, 6):
        amp = rng.uniform(0.0, wobble / (k * k - 1))
        ph = rng.uniform(0.0, 2.0 * np.pi)
        r += amp * np.cos(k * th + ph)
    r = np.maximum(r, min_radius)
    pts = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    return catmull_rom_spec(pts, closed=True)


def bunny_spec():
    """Fixed bunny-like closed outline (body, head, two ears)."""
    pts = np.array([
        [0.00, -1.00], [0.80, -0.85], [1.15, -0.25], [1.00, 0.35],
        [0.62, 0.70], [0.70, 1.15], [0.52, 1.70], [0.30, 1.20],
        [0.05, 0.95], [-0.20, 1.25], [-0.45, 1.75], [-0.60, 1.15],
        [-0.50, 0.62], [-0.95, 0.35], [-1.10, -0.30], [-0.80, -0.85],
    ])
    return catmull_rom_spec(pts, closed=True)


# --------------------------------------------------------- dense sampling

def _bezier_eval(seg, t):
    t = t[:, None]
    u = 1.0 - t
    return (u ** 3 * seg[0] + 3 * u ** 2 * t * seg[1]
            + 3 * u * t ** 2 * seg[2] + t ** 3 * seg[3])


def dense_sample(spec, resolution=256):
    """Uniform-parameter samples along the chain with per-sample normals.

    Normals are orthogonal to the chord joining the two neighbor samples
    (one-sided at open ends) and point to the left of the traversal.
    """
    if resolution < 64:
        raise ValueError("resolution must be at least 64 per segment")
    parts = []
    nseg = len(spec.segments)
    for i, seg in enumerate(spec.segments):
        last = (i == nseg - 1) and not spec.closed
        t = np.linspace(0.0, 1.0, resolution + 1)
        if not last:
            t = t[:-1]
        parts.append(_bezier_eval(seg, t))
    samples = np.vstack(parts)
    d = np.hypot(*np.diff(samples, axis=0).T)
    if np.any(d == 0.0):
        k = int(np.nonzero(d == 0.0)[0][0])
        raise DegenerateInputError(
            f"coincident adjacent samples in segment {k // resolution}")
    if spec.closed:
        chord = np.roll(samples, -1, axis=0) - np.roll(samples, 1, axis=0)
    else:
        chord = np.empty_like(samples)
        chord[1:-1] = samples[2:] - samples[:-2]
        chord[0] = samples[1] - samples[0]
        chord[-1] = samples[-1] - samples[-2]
    norm = np.hypot(chord[:, 0], chord[:, 1])
    if np.any(norm == 0.0):
        raise DegenerateInputError("degenerate chord (coincident neighbor samples)")
    normals = np.stack([-chord[:, 1], chord[:, 0]], axis=1) / norm[:, None]
    return DenseCurveSample(samples=samples, normals=normals, closed=spec.closed)


# ------------------------------------------------------------ medial axis

@_accel.jit
def _medial_loop(samples, normals):
    n = samples.shape[0]
    out = np.empty((2 * n, 2), dtype=np.float64)
    m = 0
    for i in range(n):
        sx = samples[i, 0]
        sy = samples[i, 1]
        nx = normals[i, 0]
        ny = normals[i, 1]
        tpos = np.inf
        tneg = -np.inf
        for j in range(n):
            if j == i:
                continue
            dx = samples[j, 0] - sx
            dy = samples[j, 1] - sy
            den = 2.0 * (nx * dx + ny * dy)
            if den == 0.0:
                continue
            t = (dx * dx + dy * dy) / den
            if t > 0.0:
                if t < tpos:
                    tpos = t
            elif t < 0.0:
                if t > tneg:
                    tneg = t
        if np.isfinite(tpos):
            out[m, 0] = sx + tpos * nx
            out[m, 1] = sy + tpos * ny
            m += 1
        if np.isfinite(tneg):
            out[m, 0] = sx + tneg * nx
            out[m, 1] = sy + tneg * ny
            m += 1
    return out[:m]


def _medial_numpy(samples, normals):
    n = len(samples)
    pts = []
    for i in range(n):
        d = samples - samples[i]
        den = 2.0 * (d @ normals[i])
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (d ** 2).sum(axis=1) / den
        t[i] = np.nan
        pos = t[(t > 0.0) & np.isfinite(t)]
        neg = t[(t < 0.0) & np.isfinite(t)]
        if len(pos):
            pts.append(samples[i] + pos.min() * normals[i])
        if len(neg):
            pts.append(samples[i] + neg.max() * normals[i])
    return np.asarray(pts).reshape(-1, 2)


def approx_medial_axis(dense):
    """Medial axis estimate by largest empty tangent disks.

    For every sample the disk center slides along the normal line until the
    disk through the sample first touches another sample; both normal
    directions are probed so inner and outer branches contribute.  Only
    defined for closed curves.
    """
    if not dense.closed:
        raise ValueError("medial axis probe is defined for closed curves only")
    if _accel.use_numba():
        pts = _medial_loop(dense.samples, dense.normals)
    else:
        pts = _medial_numpy(dense.samples, dense.normals)
    if len(pts) == 0:
        raise DegenerateInputError("no medial points found")
    return MedialApprox(points=pts)


def compute_lfs(dense, medial):
    """Fill lfs as the distance from each sample to the nearest medial point."""
    if len(medial.points) == 0:
        raise ValueError("empty medial approximation")
    from scipy.spatial import cKDTree
    d, _ = cKDTree(medial.points).query(dense.samples)
    return replace(dense, lfs=np.asarray(d))


# ------------------------------------------------------- epsilon sampling

def epsilon_sample(dense, spec):
    """Greedy feature-adaptive subset of a dense sampling.

    Starting at dense sample 0, the walk keeps advancing while the chord
    from the last selected point stays below ``eps`` times the running
    minimum of lfs over the skipped stretch, selecting the last valid
    sample each time.  Returns the selected points (with normal and lfs
    provenance) and the ordered ground-truth polygon.
    """
    if dense.lfs is None:
        raise ValueError("dense sample carries no lfs; run compute_lfs first")
    eps = spec.epsilon if isinstance(spec, SamplingSpec) else float(spec)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    s = dense.samples
    lfs = dense.lfs
    n = len(s)
    end = n if dense.closed else n - 1
    sel = [0]
    a = 0
    while a < end:
        j = a + 1
        lfs_min = lfs[a]
        best = -1
        while j <= end:
            idx = j % n
            lfs_min = min(lfs_min, lfs[idx])
            gap = np.hypot(s[idx, 0] - s[a, 0], s[idx, 1] - s[a, 1])
            if gap < eps * lfs_min:
                best = j
                j += 1
            else:
                break
        if best < 0:
            best = a + 1  # dense step already exceeds the bound: take it
        if best >= end:
            if not dense.closed:
                sel.append(end)  # an open curve keeps its final endpoint
            break  # a closed walk stops where it started
        sel.append(best)
        a = best
    if dense.closed and len(sel) > 3:
        # avoid a degenerate short closing edge
        last, first = sel[-1], sel[0]
        gap = np.hypot(*(s[last] - s[first]))
        if gap < eps * lfs[last] / 2.0:
            sel.pop()
    if dense.closed and len(sel) < 3:
        raise DegenerateInputError(
            f"epsilon={eps} leaves {len(sel)} samples on a closed curve")
    idx = np.asarray(sel, dtype=np.int64)
    ps = PointSet(s[idx], normals=dense.normals[idx], lfs=lfs[idx])
    gt = GroundTruth.from_ordered(s[idx], closed=dense.closed)
    return ps, gt


def verify_epsilon_sampling(dense, selected, eps):
    """A-posteriori check of the sampling condition against the dense curve:
    every dense sample must lie within eps * lfs of a selected point, up to
    one dense step of slack (the construction is inherently discretized).

    Returns the number of violating dense samples.
    """
    from scipy.spatial import cKDTree
    d, _ = cKDTree(np.asarray(selected)).query(dense.samples)
    step = np.hypot(*np.diff(dense.samples, axis=0).T)
    slack = np.empty(len(dense.samples))
    slack[:-1] = step
    slack[-1] = step[-1]
    slack[1:] = np.maximum(slack[1:], step)
    return int(np.count_nonzero(d >= eps * dense.lfs + slack))


# ---------------------------------------------------------- raster inputs

def extract_image_boundary(raster):
    """White pixels with at least one non-white 8-neighbor (the image border
    counts as non-white).  Returns (k, 2) integer (row, col) pairs in
    row-major order."""
    img = np.asarray(raster)
    if img.ndim != 2 or img.size == 0:
        raise ValueError("raster must be a non-empty 2D array")
    white = img if img.dtype == bool else img >= 128
    padded = np.zeros((white.shape[0] + 2, white.shape[1] + 2), dtype=bool)
    padded[1:-1, 1:-1] = white
    all_nb = np.ones_like(white)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            all_nb &= padded[1 + dr:padded.shape[0] - 1 + dr,
                             1 + dc:padded.shape[1] - 1 + dc]
    boundary = white & ~all_nb
    rows, cols = np.nonzero(boundary)
    return np.stack([rows, cols], axis=1).astype(np.int64)


def pixel_to_world(pixels):
    """(row, col) -> (col + 0.5, row + 0.5); y grows downward, as in images."""
    px = np.asarray(pixels, dtype=np.float64).reshape(-1, 2)
    return np.stack([px[:, 1] + 0.5, px[:, 0] + 0.5], axis=1)


def dart_sample(boundary, r, seed):
    """Randomized thinning: repeatedly pick a surviving boundary pixel
    uniformly at random, emit it, and erase every boundary pixel closer
    than r; the result is an (r, r)-separated covering of the boundary."""
    if not r > 0:
        raise ValueError(f"erase radius must be positive, got {r}")
    px = np.asarray(boundary, dtype=np.int64).reshape(-1, 2)
    if len(px) == 0:
        return PointSet(np.empty((0, 2)))
    world = pixel_to_world(px)
    rng = np.random.default_rng(seed)
    alive = np.ones(len(px), dtype=bool)
    out = []
    r2 = float(r) * float(r)
    while alive.any():
        candidates = np.nonzero(alive)[0]
        pick = candidates[rng.integers(len(candidates))]
        out.append(world[pick])
        d2 = ((world - world[pick]) ** 2).sum(axis=1)
        alive &= d2 >= r2
    return PointSet(np.asarray(out))


# ------------------------------------------------------------- PGM format

def load_pgm(path):
    """Read a P2/P5 PGM; returns a uint16 array (white threshold is 128)."""
    with open(path, "rb") as f:
        data = f.read()
    tokens = []
    i = 0
    while len(tokens) < 4 and i < len(data):
        if data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] != b"\n":
                i += 1
        elif data[i:i + 1].isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j:j + 1].isspace():
                j += 1
            tokens.append(data[i:j])
            i = j
    if len(tokens) < 4 or tokens[0] not in (b"P2", b"P5"):
        raise ValueError(f"{path}: not a P2/P5 PGM")
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if tokens[0] == b"P2":
        vals = np.array(data[i:].split(), dtype=np.uint16)
    else:
        i += 1  # single whitespace after maxval
        if maxval < 256:
            vals = np.frombuffer(data[i:i + w * h], dtype=np.uint8).astype(np.uint16)
        else:
            vals = np.frombuffer(data[i:i + 2 * w * h], dtype=">u2").astype(np.uint16)
    if vals.size != w * h:
        raise ValueError(f"{path}: expected {w * h} pixels, got {vals.size}")
    return vals.reshape(h, w)


def save_pgm(img, path):
    img = np.asarray(img)
    if img.dtype == bool:
        img = np.where(img, 255, 0)
    img = img.astype(np.uint16)
    with open(path, "w") as f:
        f.write(f"P2\n{img.shape[1]} {img.shape[0]}\n255\n")
        for row in img:
            f.write(" ".join(str(min(int(v), 255)) for v in row) + "\n")
