"""Sampler tests: dense Bezier sampling, medial axis, lfs, feature-adaptive
selection and the raster pipeline."""

import numpy as np
import pytest

from curvebench.errors import DegenerateInputError
from curvebench.sampler import (BezierCurveSpec, SamplingSpec,
                                approx_medial_axis, bunny_spec,
                                catmull_rom_spec, circle_spec, compute_lfs,
                                dart_sample, dense_sample, ellipse_spec,
                                epsilon_sample, extract_image_boundary,
                                load_bezier_spec, load_pgm, pixel_to_world,
                                random_blob_spec, save_bezier_spec, save_pgm,
                                verify_epsilon_sampling)


def circle_dense(segments=8, resolution=256):
    d = dense_sample(circle_spec(segments=segments), resolution)
    return compute_lfs(d, approx_medial_axis(d))


# ------------------------------------------------------------ bezier spec

def test_spec_validation():
    with pytest.raises(ValueError):
        BezierCurveSpec(np.array([[[0, 0], [1, 0], [2, 0], [3, 0]],
                                  [[9, 9], [4, 0], [5, 0], [6, 0]]]), closed=False)
    with pytest.raises(ValueError):
        BezierCurveSpec(np.array([[[0, 0], [1, 0], [2, 0], [3, 1]]]), closed=True)


def test_spec_file_round_trip(tmp_path):
    spec = random_blob_spec(4)
    path = tmp_path / "blob.bez"
    save_bezier_spec(spec, path)
    back = load_bezier_spec(path)
    assert back.closed == spec.closed
    assert np.array_equal(back.segments, spec.segments)


# ---------------------------------------------------------- dense sampling

def test_dense_sample_straight_line_normals():
    spec = BezierCurveSpec(np.array([[[0, 0], [1, 0], [2, 0], [3, 0]]]), closed=False)
    d = dense_sample(spec, 100)
    assert np.allclose(d.normals, [0.0, 1.0])  # left of +x travel


def test_dense_sample_circle_radial_accuracy():
    d = dense_sample(circle_spec(), 256)  # 4-segment circle
    r = np.hypot(*d.samples.T)
    assert np.abs(r - 1.0).max() < 3e-3
    assert np.abs(np.hypot(*d.normals.T) - 1.0).max() < 1e-9


def test_dense_sample_open_endpoints_one_sided():
    spec = catmull_rom_spec([[0, 0], [1, 0.2], [2, 0], [3, -0.4]], closed=False)
    d = dense_sample(spec, 64)
    chord0 = d.samples[1] - d.samples[0]
    n0 = np.array([-chord0[1], chord0[0]])
    n0 /= np.hypot(*n0)
    assert np.allclose(d.normals[0], n0)


def test_dense_sample_rejects_degenerate_segment():
    seg = np.zeros((1, 4, 2))
    with pytest.raises(DegenerateInputError):
        dense_sample(BezierCurveSpec(seg, closed=False), 64)


def test_dense_sample_minimum_resolution():
    with pytest.raises(ValueError):
        dense_sample(circle_spec(), 32)


# ------------------------------------------------------------ medial axis

def test_medial_axis_circle_collapses_to_center():
    d = dense_sample(circle_spec(segments=8), 256)
    m = approx_medial_axis(d)
    assert np.hypot(*m.points.T).max() < 5e-3


def test_medial_axis_ellipse_on_major_axis():
    d = dense_sample(ellipse_spec(2.0, 1.0, segments=8), 256)
    m = approx_medial_axis(d)
    assert np.abs(m.points[:, 1]).max() < 1e-2
    # branch tips approach the centers of curvature of the sharp ends
    assert np.abs(m.points[:, 0]).max() < 1.5 + 1e-2


def test_medial_axis_refuses_open_curves():
    spec = catmull_rom_spec([[0, 0], [1, 0], [2, 0.5]], closed=False)
    with pytest.raises(ValueError):
        approx_medial_axis(dense_sample(spec, 64))


# -------------------------------------------------------------------- lfs

def test_lfs_circle_is_radius():
    d = circle_dense()
    assert np.abs(d.lfs - 1.0).max() < 1e-2


def test_lfs_ellipse_matches_analytic_distance():
    # analytic medial axis of the 2:1 ellipse: segment y=0, |x| <= 1.5
    d = dense_sample(ellipse_spec(2.0, 1.0, segments=8), 256)
    d = compute_lfs(d, approx_medial_axis(d))
    seg_x = np.clip(d.samples[:, 0], -1.5, 1.5)
    analytic = np.hypot(d.samples[:, 0] - seg_x, d.samples[:, 1])
    assert np.abs(d.lfs - analytic).max() < 1.5e-2
    co = int(np.argmin(np.abs(d.samples[:, 0])))
    assert abs(d.lfs[co] - 1.0) < 5e-3
    sharp = int(np.argmax(d.samples[:, 0]))
    assert abs(d.lfs[sharp] - 0.5) < 5e-3


def test_lfs_equals_linear_scan():
    d0 = dense_sample(random_blob_spec(6), 256)
    m = approx_medial_axis(d0)
    d = compute_lfs(d0, m)
    brute = np.sqrt(((d.samples[:, None, :] - m.points[None]) ** 2).sum(-1).min(1))
    assert np.allclose(d.lfs, brute, rtol=1e-12, atol=0.0)


def test_lfs_lipschitz_along_curve():
    d = compute_lfs(*(lambda x: (x, approx_medial_axis(x)))(
        dense_sample(random_blob_spec(7), 256)))
    step = np.hypot(*np.diff(d.samples, axis=0).T)
    dl = np.abs(np.diff(d.lfs))
    assert np.all(dl <= step + 1e-12)


# ------------------------------------------------------- epsilon sampling

def test_epsilon_sample_circle_count():
    d = circle_dense()
    ps, gt = epsilon_sample(d, SamplingSpec(0.25))
    assert 25 <= len(ps) <= 27
    assert len(gt.edges) == len(ps)  # closed polygon
    assert ps.has_sampling_provenance()


def test_epsilon_sample_small_eps_keeps_almost_all():
    d = circle_dense()
    ps, _ = epsilon_sample(d, SamplingSpec(1e-3))
    assert len(ps) > 0.9 * len(d.samples)


def test_epsilon_sample_counts_decrease_with_eps():
    spec = bunny_spec()
    d = dense_sample(spec, 256)
    d = compute_lfs(d, approx_medial_axis(d))
    counts = [len(epsilon_sample(d, SamplingSpec(e))[0]) for e in (0.25, 0.5, 0.75)]
    assert counts[0] > counts[1] > counts[2]


def test_epsilon_sample_satisfies_condition_a_posteriori():
    for seed in (0, 2, 9):
        d = compute_lfs(*(lambda x: (x, approx_medial_axis(x)))(
            dense_sample(random_blob_spec(seed), 256)))
        for eps in (0.2, 0.3, 0.45):
            ps, _ = epsilon_sample(d, SamplingSpec(eps))
            assert verify_epsilon_sampling(d, ps.points, eps) == 0


def test_epsilon_sample_too_few_points_errors():
    d = circle_dense()
    # forge an lfs large enough that the walk eats the whole curve
    from dataclasses import replace
    forged = replace(d, lfs=np.full(len(d.samples), 1e9))
    with pytest.raises(DegenerateInputError):
        epsilon_sample(forged, SamplingSpec(0.9))


def test_epsilon_sample_requires_lfs():
    d = dense_sample(circle_spec(), 256)
    with pytest.raises(ValueError):
        epsilon_sample(d, SamplingSpec(0.3))


def test_epsilon_sample_open_curve_keeps_endpoints():
    from dataclasses import replace
    spec = catmull_rom_spec([[0, 0], [1, 0.3], [2, 0], [3, 0.5], [4, 0]],
                            closed=False)
    d = dense_sample(spec, 64)
    d = replace(d, lfs=np.full(len(d.samples), 0.8))
    ps, gt = epsilon_sample(d, SamplingSpec(0.3))
    assert np.array_equal(ps.points[0], d.samples[0])
    assert np.array_equal(ps.points[-1], d.samples[-1])
    assert gt.closed is False
    assert len(gt.edges) == len(ps) - 1  # open polyline, no closing edge


def test_sampling_spec_validation():
    with pytest.raises(ValueError):
        SamplingSpec(0.0)
    with pytest.raises(ValueError):
        SamplingSpec(1.0)
    with pytest.raises(ValueError):
        SamplingSpec(0.3, dense_resolution=32)


# ------------------------------------------------------------- raster path

def square_raster():
    img = np.zeros((20, 22), dtype=np.uint8)
    img[5:15, 6:16] = 255
    return img


def test_extract_boundary_all_black():
    assert len(extract_image_boundary(np.zeros((8, 8), dtype=np.uint8))) == 0


def test_extract_boundary_single_pixel():
    img = np.zeros((5, 5), dtype=np.uint8)
    img[2, 3] = 255
    b = extract_image_boundary(img)
    assert b.tolist() == [[2, 3]]


def test_extract_boundary_square_perimeter():
    b = extract_image_boundary(square_raster())
    assert len(b) == 36  # 4 * 10 - 4
    rows, cols = b[:, 0], b[:, 1]
    assert rows.min() == 5 and rows.max() == 14
    assert cols.min() == 6 and cols.max() == 15


def test_extract_boundary_image_border_counts():
    img = np.full((4, 4), 255, dtype=np.uint8)
    b = extract_image_boundary(img)
    assert len(b) == 12  # all but the 2x2 core touch the border


def test_dart_sample_small_radius_keeps_all():
    b = extract_image_boundary(square_raster())
    ps = dart_sample(b, 0.5, seed=1)
    assert len(ps) == len(b)


def test_dart_sample_huge_radius_single_point():
    b = extract_image_boundary(square_raster())
    ps = dart_sample(b, 1000.0, seed=1)
    assert len(ps) == 1


def test_dart_sample_separation_and_coverage():
    b = extract_image_boundary(square_raster())
    world = pixel_to_world(b)
    for seed in range(5):
        ps = dart_sample(b, 3.0, seed=seed)
        pts = ps.points
        d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
        np.fill_diagonal(d, np.inf)
        assert d.min() >= 3.0
        cover = np.sqrt(((world[:, None] - pts[None]) ** 2).sum(-1)).min(1)
        assert cover.max() < 3.0


def test_dart_sample_deterministic():
    b = extract_image_boundary(square_raster())
    a = dart_sample(b, 2.0, seed=42).points
    c = dart_sample(b, 2.0, seed=42).points
    assert np.array_equal(a, c)


def test_dart_sample_empty_boundary():
    assert len(dart_sample(np.empty((0, 2), dtype=np.int64), 2.0, seed=0)) == 0


# -------------------------------------------------------------- pgm files

def test_pgm_round_trip(tmp_path):
    img = square_raster()
    p = tmp_path / "sq.pgm"
    save_pgm(img, p)
    back = load_pgm(p)
    assert np.array_equal(back, img)


def test_pgm_p5(tmp_path):
    img = square_raster()
    p = tmp_path / "sq5.pgm"
    with open(p, "wb") as f:
        f.write(b"P5\n# binary square\n22 20\n255\n")
        f.write(img.astype(np.uint8).tobytes())
    assert np.array_equal(load_pgm(p), img)


def test_pgm_rejects_garbage(tmp_path):
    p = tmp_path / "bad.pgm"
    p.write_text("P7\n1 1\n255\n0\n")
    with pytest.raises(ValueError):
        load_pgm(p)
