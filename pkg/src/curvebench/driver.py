"""Benchmark driver: test-case materialization, suite execution, reporting.

A suite is a full factorial over cases x algorithms x levels.  What a level
means depends on the suite:

* ``sampling``       - level is the sampling eps; inputs are regenerated
* ``noisy``          - level is the uniform-noise delta (bbox fraction)
* ``lfsnoise``       - level is the feature-size-noise delta, at eps = 0.3
* ``sampling-noise`` - level is eps, with feature-size noise at delta = 1/3
* ``outliers``       - level is the outlier percentage
* ``manifold``       - clean run, single level

``open-curves``, ``multiple-curves``, ``sharp-corners``, ``intersecting``
and ``non-manifold`` are accepted as suite tags and run the clean factorial
over whatever fixture cases they are given; they differ only in data.
"""

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import UndefinedMetricError
from .geom import PointSet
from .metrics import (GroundTruth, MetricsReport, curve_total_length,
                      exact_match, hausdorff_and_rms, is_manifold,
                      parse_ground_truth, write_ground_truth)
from .perturb import NoiseSpec, OutlierSpec, add_outliers, lfs_noise, uniform_noise
from .reconstruct import AlgorithmId, reconstruct
from .sampler import (SamplingSpec, approx_medial_axis, compute_lfs,
                      dense_sample, epsilon_sample, random_blob_spec)

GENERATED_SUITES = ("sampling", "lfsnoise", "sampling-noise")
CLEAN_SUITES = ("manifold", "open-curves", "multiple-curves", "sharp-corners",
                "intersecting", "non-manifold")
SUITES = ("sampling", "noisy", "lfsnoise", "sampling-noise", "outliers") + CLEAN_SUITES

DEFAULT_LEVELS = {
    "sampling": (0.25, 0.5, 0.75),
    "noisy": (0.0, 0.003, 0.01, 0.03),
    "lfsnoise": (0.1, 1.0 / 3.0, 0.5),
    "sampling-noise": (0.1, 0.2, 0.4),
    "outliers": (5.0, 10.0, 20.0),
}
BASE_EPS = 0.3          # sampling density for suites that perturb a fixed sampling
SAMPLING_NOISE_DELTA = 1.0 / 3.0


@dataclass(frozen=True)
class TestCase:
    """One concrete reconstruction input."""

    __test__ = False  # not a pytest class despite the name

    id: str
    input: PointSet
    ground_truth: GroundTruth = None
    provenance: str = "classic-file"  # classic-file | generated-bezier | image-sampled
    perturbation: str = None

    def __post_init__(self):
        if self.provenance == "generated-bezier" and self.ground_truth is None:
            raise ValueError("generated cases must carry ground truth")


@dataclass(frozen=True)
class BezierCase:
    """A generated smooth curve from which samplings are drawn per level."""

    id: str
    dense: object  # DenseCurveSample with lfs


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    algorithms: tuple
    cases: tuple
    levels: tuple = None
    seed: int = 0
    output_dir: str = None
    workers: int = 1
    spacing: float = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; valid: {', '.join(SUITES)}")
        if not self.algorithms:
            raise ValueError("no algorithms configured")
        if not self.cases:
            raise ValueError("empty case list")
        levels = self.levels
        if self.suite in CLEAN_SUITES:
            levels = (0.0,)
        elif levels is None:
            levels = DEFAULT_LEVELS[self.suite]
        if not levels:
            raise ValueError("no levels configured")
        object.__setattr__(self, "levels", tuple(float(v) for v in levels))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "cases", tuple(self.cases))


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    algorithm: str
    level: float
    status: str  # "OK" | "FAILED"
    report: MetricsReport = None
    error: str = None
    curve: object = None  # PolyCurve on success


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    rows: tuple
    aggregates: tuple  # (algorithm, level, cases, successes, mean_rms,
    #                    mean_hausdorff, exact_percent, mean_runtime)


def make_bezier_case(case_id, spec, resolution=256):
    d = dense_sample(spec, resolution)
    d = compute_lfs(d, approx_medial_axis(d))
    return BezierCase(id=case_id, dense=d)


def generate_corpus(count, seed, resolution=256):
    """Deterministic corpus of random smooth closed curves."""
    return [make_bezier_case(f"blob{seed + i:04d}", random_blob_spec(seed + i),
                             resolution) for i in range(count)]


# --------------------------------------------------------------- run_case

_WARM = {}


def warm_up(algorithms, big=False):
    """Run each algorithm once on a token input so jit compilation never
    lands inside a timed reconstruction.  ``big`` warms with an input large
    enough to build the compiled triangulation path as well."""
    n = 256 if big else 12
    ps = PointSet(np.random.default_rng(0).random((n, 2)))
    for alg in algorithms:
        key = alg.label()
        if _WARM.get(key, -1) >= n:
            continue
        try:
            reconstruct(ps, alg)
        except Exception:  # noqa: BLE001 - warmup is best effort
            pass
        _WARM[key] = n


def run_case(case, alg, spacing=None):
    """Reconstruct one case with one algorithm and measure it.

    Timing covers the reconstruction call only.  Algorithm failures and
    empty outputs become FAILED results instead of exceptions; without
    ground truth only manifoldness and runtime are reported.
    """
    try:
        t0 = time.perf_counter()
        curve = reconstruct(case.input, alg)
        runtime = time.perf_counter() - t0
    except Exception as exc:  # noqa: BLE001 - converted to a FAILED row
        return CaseResult(case.id, alg.label(), 0.0, "FAILED",
                          error=f"{type(exc).__name__}: {exc}")
    manifold, open_ct = is_manifold(curve)
    gt = case.ground_truth
    if gt is None:
        rep = MetricsReport(None, None, manifold, open_ct, None, runtime)
        return CaseResult(case.id, alg.label(), 0.0, "OK", report=rep, curve=curve)
    if len(curve.edges) == 0:
        return CaseResult(case.id, alg.label(), 0.0, "FAILED",
                          error="empty reconstruction; metrics undefined")
    try:
        exact = exact_match(curve, gt)
    except ValueError:
        exact = False  # vertex spaces differ (e.g. outliers appended)
    try:
        h, r = hausdorff_and_rms(curve, gt, spacing)
    except UndefinedMetricError as exc:
        return CaseResult(case.id, alg.label(), 0.0, "FAILED", error=str(exc))
    rep = MetricsReport(h, r, manifold, open_ct, exact, runtime)
    return CaseResult(case.id, alg.label(), 0.0, "OK", report=rep, curve=curve)


# -------------------------------------------------------------- run_suite

def _materialize(case, suite, level, seed):
    """Turn a configured case into the concrete TestCase for one level."""
    if isinstance(case, BezierCase):
        if suite == "sampling":
            eps = level
        elif suite == "sampling-noise":
            eps = level
        else:
            eps = BASE_EPS
        ps, gt = epsilon_sample(case.dense, SamplingSpec(eps))
        tc = TestCase(id=case.id, input=ps, ground_truth=gt,
                      provenance="generated-bezier")
    elif isinstance(case, TestCase):
        if suite in GENERATED_SUITES and suite != "lfsnoise":
            raise ValueError(f"suite {suite!r} needs generated Bezier cases")
        tc = case
    else:
        raise TypeError(f"unsupported case type {type(case)!r}")

    if suite == "noisy":
        if level > 0:
            noisy = uniform_noise(tc.input, NoiseSpec("uniform", level, seed))
            tc = TestCase(tc.id, noisy, tc.ground_truth, tc.provenance,
                          perturbation=f"uniform:{level:g}")
    elif suite == "lfsnoise":
        if not tc.input.has_sampling_provenance():
            raise ValueError(f"case {tc.id}: lfs noise needs sampling provenance")
        if level > 0:
            noisy = lfs_noise(tc.input, NoiseSpec("lfs", level, seed))
            tc = TestCase(tc.id, noisy, tc.ground_truth, tc.provenance,
                          perturbation=f"lfs:{level:g}")
    elif suite == "sampling-noise":
        noisy = lfs_noise(tc.input, NoiseSpec("lfs", SAMPLING_NOISE_DELTA, seed))
        tc = TestCase(tc.id, noisy, tc.ground_truth, tc.provenance,
                      perturbation=f"eps:{level:g}+lfs:{SAMPLING_NOISE_DELTA:g}")
    elif suite == "outliers":
        if level > 0:
            extended = add_outliers(tc.input, OutlierSpec(level, seed))
            tc = TestCase(tc.id, extended, tc.ground_truth, tc.provenance,
                          perturbation=f"outliers:{level:g}%")
    return tc


def run_suite(cfg):
    """Full factorial over the configuration; every combination yields
    exactly one row, OK or FAILED."""
    seed = cfg.seed
    env = os.environ.get("CURVEBENCH_SEED")
    if env is not None and env.strip():
        seed = int(env)

    jobs = []
    biggest = 0
    for li, level in enumerate(cfg.levels):
        for ci, case in enumerate(cfg.cases):
            job_seed = seed + 7919 * ci + 104729 * li
            try:
                tc = _materialize(case, cfg.suite, level, job_seed)
                err = None
                biggest = max(biggest, len(tc.input))
            except Exception as exc:  # noqa: BLE001 - reported per row
                tc, err = None, f"{type(exc).__name__}: {exc}"
            for alg in cfg.algorithms:
                jobs.append((tc, alg, level, err))
    from .delaunay import _FAST_PATH_MIN
    warm_up(cfg.algorithms, big=biggest >= _FAST_PATH_MIN)

    def run(job):
        tc, alg, level, err = job
        if err is not None:
            cid = tc.id if tc is not None else "?"
            return CaseResult(cid, alg.label(), level, "FAILED", error=err)
        res = run_case(tc, alg, cfg.spacing)
        return CaseResult(res.case_id, res.algorithm, level, res.status,
                          res.report, res.error, res.curve)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = tuple(pool.map(run, jobs))
    else:
        rows = tuple(run(j) for j in jobs)
    return SuiteReport(cfg.suite, seed, rows, _aggregate(rows))


def _aggregate(rows):
    keys = []
    seen = set()
    for r in rows:
        k = (r.algorithm, r.level)
        if k not in seen:
            seen.add(k)
            keys.append(k)
    out = []
    for alg, level in keys:
        sel = [r for r in rows if (r.algorithm, r.level) == (alg, level)]
        ok = [r for r in sel if r.status == "OK"]
        rmses = [r.report.rms for r in ok if r.report.rms is not None]
        hds = [r.report.hausdorff for r in ok if r.report.hausdorff is not None]
        exacts = [r.report.exact for r in ok if r.report.exact is not None]
        times = [r.report.runtime_seconds for r in ok]
        out.append((
            alg, level, len(sel), len(ok),
            float(np.mean(rmses)) if rmses else None,
            float(np.mean(hds)) if hds else None,
            100.0 * sum(exacts) / len(exacts) if exacts else None,
            float(np.mean(times)) if times else None,
        ))
    return tuple(out)


# ---------------------------------------------------------------- reports

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_report(report, out_dir):
    """rows.csv + aggregates.csv + timings.csv + one reconstruction file per
    OK row.

    rows.csv and aggregates.csv are pure functions of (config, seed), so
    reruns produce byte-identical files; wall-clock runtimes can never be,
    which is why they live in timings.csv instead.
    """
    os.makedirs(out_dir, exist_ok=True)
    rows_path = os.path.join(out_dir, "rows.csv")
    with open(rows_path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["case", "algorithm", "level", "status", "hausdorff", "rms",
                    "manifold", "open_endpoints", "exact"])
        for r in report.rows:
            if r.status == "OK":
                rep = r.report
                w.writerow([r.case_id, r.algorithm, _fmt(r.level), "OK",
                            _fmt(rep.hausdorff), _fmt(rep.rms),
                            _fmt(rep.manifold), rep.open_endpoint_count,
                            _fmt(rep.exact)])
            else:
                w.writerow([r.case_id, r.algorithm, _fmt(r.level), "FAILED",
                            "", "", "", "", ""])
    agg_path = os.path.join(out_dir, "aggregates.csv")
    with open(agg_path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["algorithm", "level", "cases", "successes", "mean_rms",
                    "mean_hausdorff", "exact_percent"])
        for alg, level, total, okc, mr, mh, ep, _ in report.aggregates:
            w.writerow([alg, _fmt(level), total, okc, _fmt(mr), _fmt(mh),
                        _fmt(ep)])
    with open(os.path.join(out_dir, "timings.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["case", "algorithm", "level", "runtime_seconds"])
        for r in report.rows:
            rt = r.report.runtime_seconds if r.status == "OK" else None
            w.writerow([r.case_id, r.algorithm, _fmt(r.level), _fmt(rt)])
    curves_dir = os.path.join(out_dir, "curves")
    os.makedirs(curves_dir, exist_ok=True)
    for r in report.rows:
        if r.status != "OK" or r.curve is None:
            continue
        name = f"{r.case_id}__{r.algorithm}__{_fmt(r.level)}.txt".replace("/", "_")
        gt = GroundTruth.from_indexed(r.curve.vertices.points, r.curve.edges)
        write_ground_truth(gt, os.path.join(curves_dir, name))
    return rows_path, agg_path


# ------------------------------------------------------------ point-set IO

def load_point_set(path):
    """Plain text points: one 'x y' pair per line, '#' comments allowed."""
    pts = []
    with open(path) as f:
        for ln, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{ln}: expected 'x y', got {line!r}")
            pts.append((float(parts[0]), float(parts[1])))
    return PointSet(np.asarray(pts, dtype=np.float64).reshape(-1, 2))


def save_point_set(ps, path):
    with open(path, "w") as f:
        for x, y in ps.points:
            f.write(f"{float(x)!r} {float(y)!r}\n")


def load_cases_from_dir(directory):
    """Every *.txt point file becomes a case; a sibling <stem>.gt.txt (either
    ground-truth format) is attached when present."""
    cases = []
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".txt") or name.endswith(".gt.txt"):
            continue
        stem = name[:-4]
        ps = load_point_set(os.path.join(directory, name))
        gt_path = os.path.join(directory, stem + ".gt.txt")
        gt = parse_ground_truth(gt_path) if os.path.exists(gt_path) else None
        cases.append(TestCase(id=stem, input=ps, ground_truth=gt))
    if not cases:
        raise ValueError(f"no point-set files (*.txt) found in {directory}")
    return cases
