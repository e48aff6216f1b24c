"""Delaunay kernel tests: oracles are exhaustive rational in-circle checks
and scipy's Qhull on non-degenerate input."""

from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import Delaunay as QhullDelaunay

from curvebench import PointSet, circumcircle, delaunay, voronoi_vertices
from curvebench.delaunay import _kernel_exact, _triangulate_raw
from curvebench.errors import (DegenerateInputError, DegenerateTriangleError,
                               DuplicatePointError)


def incircle_oracle(pts, a, b, c, d):
    fax = Fraction(pts[a, 0]) - Fraction(pts[d, 0])
    fay = Fraction(pts[a, 1]) - Fraction(pts[d, 1])
    fbx = Fraction(pts[b, 0]) - Fraction(pts[d, 0])
    fby = Fraction(pts[b, 1]) - Fraction(pts[d, 1])
    fcx = Fraction(pts[c, 0]) - Fraction(pts[d, 0])
    fcy = Fraction(pts[c, 1]) - Fraction(pts[d, 1])
    det = (fax * fax + fay * fay) * (fbx * fcy - fcx * fby) \
        + (fbx * fbx + fby * fby) * (fcx * fay - fax * fcy) \
        + (fcx * fcx + fcy * fcy) * (fax * fby - fbx * fay)
    return (det > 0) - (det < 0)


def orient_oracle(pts, a, b, c):
    det = (Fraction(pts[a, 0]) - Fraction(pts[c, 0])) \
        * (Fraction(pts[b, 1]) - Fraction(pts[c, 1])) \
        - (Fraction(pts[a, 1]) - Fraction(pts[c, 1])) \
        * (Fraction(pts[b, 0]) - Fraction(pts[c, 0]))
    return (det > 0) - (det < 0)


def edge_set(tri):
    es = set()
    for a, b, c in np.asarray(tri):
        for u, v in ((a, b), (b, c), (c, a)):
            es.add((int(min(u, v)), int(max(u, v))))
    return es


def assert_is_delaunay(pts, tri):
    """Exhaustive check: CCW triangles, exact empty circumdisks, all points
    used, edge bound E <= 3n - 6."""
    n = len(pts)
    used = set()
    for a, b, c in tri:
        assert orient_oracle(pts, a, b, c) == 1
        used.update((int(a), int(b), int(c)))
        for d in range(n):
            if d in (a, b, c):
                continue
            assert incircle_oracle(pts, a, b, c, d) <= 0
    assert used == set(range(n))
    assert len(edge_set(tri)) <= 3 * n - 6


def test_triangle():
    t = delaunay(PointSet([[0, 0], [2, 0], [1, 1.5]]))
    assert len(t.triangles) == 1


def test_square_cocircular_tie_break():
    t = delaunay(PointSet([[0, 0], [1, 0], [1, 1], [0, 1]]))
    assert len(t.triangles) == 2
    # both diagonals are Delaunay-legal; the rule keeps the one through the
    # lowest vertex index
    assert (0, 2) in t.edge_set()
    assert (1, 3) not in t.edge_set()


def test_square_tie_break_other_labelling():
    t = delaunay(PointSet([[0, 0], [1, 0], [0, 1], [1, 1]]))
    assert (0, 3) in t.edge_set()
    assert (1, 2) not in t.edge_set()


def test_random_sets_are_exactly_delaunay():
    rng = np.random.default_rng(11)
    for _ in range(5):
        pts = rng.random((60, 2)) * 10
        tri = _triangulate_raw(pts)
        assert_is_delaunay(pts, tri)


def test_random_200_points_edge_bound_and_incircle():
    rng = np.random.default_rng(5)
    pts = rng.random((200, 2))
    tri = _triangulate_raw(pts)
    assert len(edge_set(tri)) <= 3 * 200 - 6
    # spot-exhaustive on a subsample for runtime, full oracle is O(n * m)
    for a, b, c in tri[::7]:
        for d in range(200):
            if d in (a, b, c):
                continue
            assert incircle_oracle(pts, a, b, c, d) <= 0


def test_matches_qhull_on_random_input():
    rng = np.random.default_rng(23)
    for _ in range(20):
        n = int(rng.integers(4, 150))
        pts = rng.random((n, 2)) * float(rng.uniform(0.5, 50))
        assert edge_set(_triangulate_raw(pts)) == edge_set(QhullDelaunay(pts).simplices)


def test_fast_and_exact_paths_agree():
    rng = np.random.default_rng(9)
    for _ in range(8):
        n = int(rng.integers(4, 80))
        pts = rng.random((n, 2))
        tv, tn, alive, ntri, ok = _kernel_exact(pts)
        assert ok
        tri = tv[: int(ntri)][alive[: int(ntri)]]
        tri = tri[(tri != n).all(axis=1)]
        assert edge_set(tri) == edge_set(_triangulate_raw(pts))


def test_cocircular_polygon_and_grid():
    for n in (8, 26, 30):
        th = np.linspace(0, 2 * np.pi, n, endpoint=False)
        pts = np.stack([np.cos(th), np.sin(th)], axis=1)
        tri = _triangulate_raw(pts)
        assert len(tri) == n - 2
        hull = {(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)}
        assert hull <= edge_set(tri)
        assert_is_delaunay(pts, tri)
    grid = np.stack(np.meshgrid(np.arange(5.0), np.arange(5.0)), -1).reshape(-1, 2)
    tri = _triangulate_raw(grid)
    assert len(tri) == 32
    assert_is_delaunay(grid, tri)


def test_collinear_input_raises():
    with pytest.raises(DegenerateInputError):
        delaunay(PointSet([[0, 0], [1, 0], [2, 0], [3, 0]]))
    with pytest.raises(DegenerateInputError):
        delaunay(PointSet([[0, 0], [1, 1]]))


def test_collinear_runs_inside_input():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0],
                    [0.0, 1.0], [1.5, 2.0]])
    tri = _triangulate_raw(pts)
    assert_is_delaunay(pts, tri)


def test_points_on_existing_edges():
    # second batch lands exactly on hull and interior edges of the first
    pts = np.array([[0.0, 0.0], [4.0, 0.0], [4.0, 4.0], [0.0, 4.0],
                    [2.0, 0.0], [2.0, 2.0], [4.0, 2.0]])
    tri = _triangulate_raw(pts)
    assert_is_delaunay(pts, tri)


def test_duplicate_points_rejected_with_indices():
    with pytest.raises(DuplicatePointError) as ei:
        PointSet([[0, 0], [1, 1], [0, 0]])
    assert ei.value.pairs == [(0, 2)]


def test_determinism():
    rng = np.random.default_rng(77)
    pts = rng.random((120, 2))
    a = _triangulate_raw(pts)
    b = _triangulate_raw(pts)
    assert np.array_equal(a, b)


def test_every_point_in_some_triangle():
    rng = np.random.default_rng(13)
    pts = rng.random((50, 2))
    tri = _triangulate_raw(pts)
    assert set(np.unique(tri)) == set(range(50))


def test_circumcircle_examples():
    c = circumcircle((0, 0), (2, 0), (0, 2))
    assert np.allclose(c.center, (1, 1)) and np.isclose(c.radius, np.sqrt(2))
    c = circumcircle((-1, 0), (1, 0), (0, 1))
    assert np.allclose(c.center, (0, 0)) and np.isclose(c.radius, 1)
    with pytest.raises(DegenerateTriangleError):
        circumcircle((0, 0), (1, 1), (2, 2))
    rng = np.random.default_rng(2)
    for _ in range(50):
        p = rng.normal(size=(3, 2)) * rng.uniform(1e-3, 1e3)
        try:
            c = circumcircle(*p)
        except DegenerateTriangleError:
            continue
        for q in p:
            d = np.hypot(q[0] - c.center[0], q[1] - c.center[1])
            assert abs(d - c.radius) <= 1e-9 * max(c.radius, 1e-300)


def test_voronoi_vertices():
    t = delaunay(PointSet([[0, 0], [2, 0], [0, 2]]))
    assert np.allclose(voronoi_vertices(t), [[1, 1]])
    t = delaunay(PointSet([[0, 0], [1, 0], [1, 1], [0, 1]]))
    vv = voronoi_vertices(t)
    assert np.allclose(vv, [[0.5, 0.5], [0.5, 0.5]])
    rng = np.random.default_rng(4)
    ps = PointSet(rng.random((50, 2)))
    t = delaunay(ps)
    vv = voronoi_vertices(t)
    for (a, b, c), center in zip(t.triangles, vv):
        d = np.hypot(*(ps.points[[a, b, c]] - center).T)
        assert np.allclose(d, d[0], rtol=1e-9, atol=1e-12)


def test_edge_adjacency():
    t = delaunay(PointSet([[0, 0], [1, 0], [1, 1], [0, 1]]))
    adj = dict(zip(map(tuple, t.edges.tolist()), t.edge_triangles.tolist()))
    assert -1 not in adj[(0, 2)]  # the diagonal has two incident triangles
    assert sum(1 for _, (_, second) in adj.items() if second == -1) == 4


def _adversarial_families(gen):
    def clusters(n):
        centers = gen.random((max(n // 8, 1), 2))
        return centers[gen.integers(len(centers), size=n)] + gen.normal(0, 1e-4, (n, 2))

    def grid_snap(n):
        return np.round(gen.random((n, 2)) * 8) / 8.0

    def cocircular_mix(n):
        th = gen.random(n // 2) * 2 * np.pi
        circ = np.stack([np.cos(th), np.sin(th)], 1)
        return np.vstack([circ, gen.random((n - n // 2, 2)) * 2 - 1])

    def near_collinear(n):
        t = gen.random(n)
        return np.stack([t, 2 * t + gen.normal(0, 1e-13, n)], 1)

    def huge_scale(n):
        return (gen.random((n, 2)) - 0.5) * 1e12

    return (clusters, grid_snap, cocircular_mix, near_collinear, huge_scale)


def test_fuzz_adversarial_families():
    # trimmed version of the offline fuzz campaign: exact verification over
    # clustered, snapped, cocircular, near-collinear and huge-scale inputs
    gen = np.random.default_rng(99)
    fams = _adversarial_families(gen)
    done = 0
    for trial in range(40):
        f = fams[trial % len(fams)]
        pts = f(int(gen.integers(5, 30)))
        _, idx = np.unique(pts, axis=0, return_index=True)
        pts = np.ascontiguousarray(pts[np.sort(idx)], dtype=np.float64)
        if len(pts) < 3:
            continue
        try:
            tri = _triangulate_raw(pts)
        except DegenerateInputError:
            assert all(orient_oracle(pts, 0, 1, k) == 0 for k in range(2, len(pts)))
            continue
        assert_is_delaunay(pts, tri)
        done += 1
    assert done >= 30
