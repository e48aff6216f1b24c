"""curvebench: 2D curve reconstruction algorithms, samplers and benchmark."""

from .geom import Circle, PointSet, circumcircle
from .predicates import incircle, orient2d
from .delaunay import Triangulation, delaunay, voronoi_vertices
from .graphs import (Graph, beta_skeleton, delaunay_graph, emst, gabriel, rng,
                     sphere_of_influence)
from .reconstruct import (AlgorithmId, PolyCurve, alpha_disc, crust,
                          emst_curve, eps_to_rho, hnn_crust, nn_crust,
                          reconstruct)
from .sampler import (BezierCurveSpec, DenseCurveSample, MedialApprox,
                      SamplingSpec, approx_medial_axis, compute_lfs,
                      dart_sample, dense_sample, epsilon_sample,
                      extract_image_boundary)
from .perturb import NoiseSpec, OutlierSpec, add_outliers, lfs_noise, uniform_noise
from .metrics import (GroundTruth, MetricsReport, closest_point_maps,
                      exact_match, hausdorff, is_manifold, resample_curve, rms)
from .driver import SuiteConfig, SuiteReport, TestCase, run_case, run_suite, write_report

__all__ = [
    "Circle", "PointSet", "circumcircle",
    "incircle", "orient2d",
    "Triangulation", "delaunay", "voronoi_vertices",
    "Graph", "beta_skeleton", "delaunay_graph", "emst", "gabriel", "rng",
    "sphere_of_influence",
    "AlgorithmId", "PolyCurve", "alpha_disc", "crust", "emst_curve",
    "eps_to_rho", "hnn_crust", "nn_crust", "reconstruct",
    "BezierCurveSpec", "DenseCurveSample", "MedialApprox", "SamplingSpec",
    "approx_medial_axis", "compute_lfs", "dart_sample", "dense_sample",
    "epsilon_sample", "extract_image_boundary",
    "NoiseSpec", "OutlierSpec", "add_outliers", "lfs_noise", "uniform_noise",
    "GroundTruth", "MetricsReport", "closest_point_maps", "exact_match",
    "hausdorff", "is_manifold", "resample_curve", "rms",
    "SuiteConfig", "SuiteReport", "TestCase", "run_case", "run_suite",
    "write_report",
]

__version__ = "0.1.0"
