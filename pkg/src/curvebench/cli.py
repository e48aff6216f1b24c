"""Command line interface.

Single reconstruction mirrors the classic flag set (-i input, -o output,
-a algorithm, -g ground truth); experiment suites are subcommands named
after the test scripts they correspond to (run-sampling, run-noisy, ...).
"""

import argparse
import sys

from .driver import (DEFAULT_LEVELS, SuiteConfig, TestCase, generate_corpus,
                     load_cases_from_dir, load_point_set, run_case, run_suite,
                     save_point_set, write_report)
from .metrics import GroundTruth, parse_ground_truth, write_ground_truth
from .reconstruct import ALGORITHM_NAMES, AlgorithmId
from .sampler import (SamplingSpec, approx_medial_axis, compute_lfs,
                      dart_sample, dense_sample, epsilon_sample,
                      extract_image_boundary, load_bezier_spec, load_pgm)

SUITE_COMMANDS = ("run-sampling", "run-noisy", "run-lfsnoise",
                  "run-sampling-noise", "run-outliers", "run-manifold",
                  "run-open-curves", "run-multiple-curves",
                  "run-sharp-corners", "run-intersecting", "run-non-manifold")


def parse_algorithm(text, radius=None):
    """'crust' or 'alphadisc:0.05' (radius may come from --radius instead)."""
    name, _, param = text.partition(":")
    if name == "alphadisc":
        r = float(param) if param else radius
        if r is None:
            raise ValueError("alphadisc needs a radius: 'alphadisc:R' or --radius")
        return AlgorithmId(name, (r,))
    if param:
        raise ValueError(f"algorithm {name!r} takes no parameter")
    return AlgorithmId(name)


def _add_suite_parser(sub, cmd):
    suite = cmd[len("run-"):]
    p = sub.add_parser(cmd, help=f"run the {suite} suite")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--cases", metavar="DIR",
                     help="directory of point-set files (*.txt, optional *.gt.txt)")
    src.add_argument("--generate", type=int, metavar="N",
                     help="generate N smooth closed curves as the corpus")
    p.add_argument("-a", "--algorithms", default="crust,nncrust,hnncrust",
                   help="comma list, e.g. crust,nncrust,hnncrust,alphadisc:0.1,emst")
    p.add_argument("--levels", help="comma list of suite levels (defaults from the suite)")
    p.add_argument("--seed", type=int, default=0,
                   help="base seed (CURVEBENCH_SEED overrides)")
    p.add_argument("-o", "--output", required=True, help="report directory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--resolution", type=int, default=256,
                   help="dense samples per Bezier segment for generated corpora")
    return p


def build_parser():
    ap = argparse.ArgumentParser(
        prog="curvebench",
        description="2D curve reconstruction algorithms and benchmark suites")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reconstruct", help="reconstruct one point set")
    p.add_argument("-i", "--input", required=True, help="point-set file (x y per line)")
    p.add_argument("-o", "--output", required=True,
                   help="output curve file (GT-INDEXED format)")
    p.add_argument("-a", "--algorithm", required=True,
                   help="one of: " + " | ".join(ALGORITHM_NAMES))
    p.add_argument("-g", "--ground-truth", help="reference curve to score against")
    p.add_argument("--radius", type=float, help="disk radius for alphadisc")

    for cmd in SUITE_COMMANDS:
        _add_suite_parser(sub, cmd)

    p = sub.add_parser("sample-bezier", help="eps-sample a cubic Bezier chain")
    p.add_argument("-i", "--input", required=True, help="bezier spec file")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("-o", "--output", required=True, help="point-set file to write")
    p.add_argument("-g", "--ground-truth", help="ground-truth file to write")

    p = sub.add_parser("sample-image", help="dart-sample a binary image boundary")
    p.add_argument("-i", "--input", required=True, help="PGM image (P2/P5)")
    p.add_argument("--radius", type=float, required=True, help="erase radius in pixels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="point-set file to write")

    p = sub.add_parser("serve", help="serve point sets for the annotator UI")
    p.add_argument("--root", required=True, help="directory of point-set files")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", help="directory with the built annotator frontend")
    p.add_argument("--verbose", action="store_true")
    return ap


def cmd_reconstruct(args):
    ps = load_point_set(args.input)
    alg = parse_algorithm(args.algorithm, args.radius)
    gt = parse_ground_truth(args.ground_truth) if args.ground_truth else None
    case = TestCase(id=args.input, input=ps, ground_truth=gt)
    res = run_case(case, alg)
    if res.status == "FAILED":
        print(f"FAILED: {res.error}", file=sys.stderr)
        return 1
    out = GroundTruth.from_indexed(res.curve.vertices.points, res.curve.edges)
    write_ground_truth(out, args.output)
    rep = res.report
    print(f"{alg.label()}: {len(res.curve.edges)} edges -> {args.output}")
    print(f"  manifold={rep.manifold} open_endpoints={rep.open_endpoint_count} "
          f"runtime={rep.runtime_seconds:.6f}s")
    if gt is not None:
        print(f"  hausdorff={rep.hausdorff:.9g} rms={rep.rms:.9g} exact={rep.exact}")
    return 0


def cmd_suite(args, command):
    suite = command[len("run-"):]
    algorithms = tuple(parse_algorithm(a) for a in args.algorithms.split(","))
    if args.generate is not None:
        cases = generate_corpus(args.generate, args.seed, args.resolution)
    else:
        cases = load_cases_from_dir(args.cases)
    levels = None
    if args.levels:
        levels = tuple(float(v) for v in args.levels.split(","))
    cfg = SuiteConfig(suite=suite, algorithms=algorithms, cases=tuple(cases),
                      levels=levels, seed=args.seed, output_dir=args.output,
                      workers=args.workers)
    report = run_suite(cfg)
    rows_path, agg_path = write_report(report, args.output)
    ok = sum(1 for r in report.rows if r.status == "OK")
    print(f"{suite}: {len(report.rows)} rows ({ok} OK) -> {rows_path}")
    for alg, level, total, okc, mr, mh, ep, mt in report.aggregates:
        bits = [f"{alg} level={level:g}: {okc}/{total} ok"]
        if mr is not None:
            bits.append(f"rms={mr:.6g}")
        if ep is not None:
            bits.append(f"exact={ep:.1f}%")
        if mt is not None:
            bits.append(f"t={mt * 1e3:.3f}ms")
        print("  " + " ".join(bits))
    return 0


def cmd_sample_bezier(args):
    spec = load_bezier_spec(args.input)
    d = dense_sample(spec, args.resolution)
    if spec.closed:
        d = compute_lfs(d, approx_medial_axis(d))
    else:
        raise SystemExit("open curves carry no lfs estimate; closed specs only")
    ps, gt = epsilon_sample(d, SamplingSpec(args.eps, args.resolution))
    save_point_set(ps, args.output)
    print(f"{len(ps)} samples -> {args.output}")
    if args.ground_truth:
        write_ground_truth(gt, args.ground_truth)
        print(f"ground truth -> {args.ground_truth}")
    return 0


def cmd_sample_image(args):
    img = load_pgm(args.input)
    boundary = extract_image_boundary(img)
    ps = dart_sample(boundary, args.radius, args.seed)
    save_point_set(ps, args.output)
    print(f"{len(boundary)} boundary pixels, {len(ps)} samples -> {args.output}")
    return 0


def cmd_serve(args):
    from .server import serve
    httpd = serve(args.root, args.port, host=args.host, ui_dir=args.ui,
                  verbose=args.verbose)
    print(f"serving {args.root} on http://{args.host}:{args.port}")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    cmd = args.command
    try:
        if cmd == "reconstruct":
            return cmd_reconstruct(args)
        if cmd in SUITE_COMMANDS:
            return cmd_suite(args, cmd)
        if cmd == "sample-bezier":
            return cmd_sample_bezier(args)
        if cmd == "sample-image":
            return cmd_sample_image(args)
        if cmd == "serve":
            return cmd_serve(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
