"""Command-line entry point.

Subcommands: generate (gamma/spinor bundles), verify (relation suites with
JSON report), roots (root-system JSON), region (membership / sampling /
equivalence report), element (chart evaluation bundle), rank (chart rank
diagnostic).  Exit code 0 on success or all-pass, 1 on verification
failure, 2 on usage errors.

Every run echoes its configuration as one JSON line on stderr.  The seed
defaults to 0.  --threads caps BLAS threading (exact integer results do
not depend on it; it exists to make float runs resource-predictable).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import FORMAT_VERSION, __version__


def _echo_config(args: argparse.Namespace) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    print(json.dumps({"config": cfg}), file=sys.stderr)


def _set_threads(threads: str) -> None:
    if threads != "auto":
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(int(threads))


def _emit(payload: dict, out: str | None) -> None:
    from .io import write_json

    payload.setdefault("format_version", FORMAT_VERSION)
    text = json.dumps(payload, indent=2)
    if out:
        write_json(out, payload)
    else:
        print(text)


def _parse_y(text: str) -> np.ndarray:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 8:
        raise SystemExit(2)
    return np.array(vals)


def cmd_generate(args) -> int:
    from .io import write_bundle
    from .pipeline import build_pipeline

    pipe = build_pipeline()
    os.makedirs(args.out_dir, exist_ok=True)
    written = []
    for i, s in enumerate(pipe.gammas.sigma, start=1):
        base = os.path.join(args.out_dir, f"sigma_{i:02d}")
        written.append(write_bundle(base, f"sigma_{i}", s, fmt=args.format))
    for (i, j), d in sorted(pipe.spinors.delta.items()):
        base = os.path.join(args.out_dir, f"delta_{i:02d}_{j:02d}")
        written.append(write_bundle(base, f"delta_{i}_{j}", d, fmt=args.format))
    print(json.dumps({"written": len(written), "out_dir": args.out_dir}))
    return 0


def cmd_verify(args) -> int:
    from . import algebra as alg
    from .pipeline import build_pipeline

    pipe = build_pipeline()
    suites = []
    want = args.suite

    if want in ("clifford", "all"):
        suites += alg.verify_clifford_pairs(pipe.gammas)
        suites.append(alg.verify_chirality_consistency(pipe.gammas))
    if want in ("so16", "all"):
        suites.append(alg.verify_so16_on_spinors(pipe.tensor))
    relation_strata = {"so16": ["vector-vector"], "mixed": ["vector-spinor"],
                       "spinor": ["spinor-spinor"]}
    wanted_strata = []
    for key, names in relation_strata.items():
        if want in (key, "all"):
            wanted_strata.extend(names)
    if wanted_strata:
        suites += alg.verify_defining_relations(
            pipe.rep, pipe.tensor, strata=tuple(wanted_strata)
        )
    if want in ("jacobi", "all"):
        suites += alg.verify_jacobi(
            pipe.rep,
            pipe.tensor,
            samples=args.samples,
            seed=args.seed,
            full_spinor=args.jacobi_full,
        )

    passed = all(s.passed for s in suites)
    payload = {
        "format_version": FORMAT_VERSION,
        "command": "verify",
        "suite": want,
        "seed": args.seed,
        "samples": args.samples,
        "jacobi_full": bool(args.jacobi_full),
        "suites": [s.to_dict() for s in suites],
        "passed": passed,
    }
    _emit(payload, args.out)
    for s in suites:
        print(json.dumps(s.to_dict(include_timing=True)), file=sys.stderr)
    return 0 if passed else 1


def cmd_roots(args) -> int:
    from .pipeline import build_pipeline

    pipe = build_pipeline()
    rs = pipe.root_system
    payload = {
        "format_version": FORMAT_VERSION,
        "command": "roots",
        "scale": str(rs.scale),
        "snap_residual_below": "1e-9",
        "cartan_spinor_indices": list(pipe.cartan.alphas),
        "labeling": {
            "axis_signs": list(rs.axis_signs),
            "axis_reversed": rs.axis_reversed,
            "conventional_labeling": rs.conventional_labeling,
            "literal_raw_match": rs.literal_raw_match,
        },
        "roots_doubled": sorted([list(r.coords) for r in rs.roots]),
        "positives_doubled": sorted([list(r.coords) for r in rs.positives]),
        "simples_doubled": [list(r.coords) for r in rs.simples],
        "highest_doubled": list(rs.highest.coords),
        "cartan_matrix": rs.cartan_matrix.tolist(),
        "marks": list(rs.marks),
    }
    _emit(payload, args.out)
    return 0


def cmd_region(args) -> int:
    from . import chart as ch
    from .pipeline import build_pipeline

    pipe = build_pipeline()
    region = pipe.region
    if args.check is not None:
        y = _parse_y(args.check)
        payload = {
            "command": "region-check",
            "y": y.tolist(),
            "in_region_roots": ch.in_region_roots(y, region),
            "in_region_solved": ch.in_region_solved(y),
        }
        _emit(payload, args.out)
        return 0
    if args.report_equivalence:
        rep = ch.region_equivalence_report(args.report_equivalence, args.seed, region)
        payload = {"command": "region-equivalence", **rep}
        _emit(payload, args.out)
        return 0
    ys = ch.sample_region(args.seed, region, args.sample)
    payload = {
        "command": "region-sample",
        "seed": args.seed,
        "samples": [list(map(float, row)) for row in np.atleast_2d(ys)],
    }
    _emit(payload, args.out)
    return 0


def cmd_element(args) -> int:
    from . import chart as ch
    from .io import write_bundle
    from .pipeline import build_pipeline

    pipe = build_pipeline()
    y = _parse_y(args.y)
    rng = np.random.default_rng(args.seed)
    x = rng.uniform(-0.5, 0.5, 120) if args.x_random else np.zeros(120)
    z = rng.uniform(-0.5, 0.5, 120) if args.z_random else np.zeros(120)
    g = pipe.engine.chart(ch.EulerPoint(x, y, z))
    header = write_bundle(args.out, "euler-chart-element", g)
    print(json.dumps({"written": header}))
    return 0


def cmd_rank(args) -> int:
    from . import chart as ch
    from .pipeline import build_pipeline

    pipe = build_pipeline()
    p = ch.random_euler_point(args.seed, pipe.region, spread=args.spread)
    rank, svals, threshold = pipe.engine.chart_rank(p, h=args.step)
    payload = {
        "command": "rank",
        "seed": args.seed,
        "step": args.step,
        "spread": args.spread,
        "rank": rank,
        "sigma_max": float(svals[0]),
        "sigma_248": float(svals[247]),
        "threshold": float(threshold),
        "gap_sigma248_over_threshold": float(svals[247] / threshold),
    }
    _emit(payload, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="e8lie",
        description="exact E8 construction, verification, roots and Euler chart",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"e8lie {__version__} (format {FORMAT_VERSION})",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    default_threads = os.environ.get("E8LIE_THREADS", "auto")

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        p.add_argument(
            "--threads",
            default=default_threads,
            help="BLAS thread cap or 'auto' (env override: E8LIE_THREADS)",
        )
        p.add_argument("--out", default=None, help="write the JSON payload here")

    p = sub.add_parser("generate", help="write gamma/spinor generator bundles")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--format", choices=("bin", "csv"), default="bin")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", default=default_threads)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="run the exact verification suites")
    p.add_argument(
        "--suite",
        choices=("clifford", "so16", "mixed", "spinor", "jacobi", "all"),
        default="all",
    )
    p.add_argument("--jacobi-full", action="store_true", help="exhaustive spinor-triple stratum")
    p.add_argument("--samples", type=int, default=100_000)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roots", help="extract the root system")
    common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("region", help="torus fundamental-domain queries")
    p.add_argument("--check", default=None, help="y1,...,y8 membership check")
    p.add_argument("--sample", type=int, default=1)
    p.add_argument("--report-equivalence", type=int, default=0, metavar="N")
    common(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("element", help="evaluate a chart element to a bundle")
    p.add_argument("--y", required=True, help="y1,...,y8")
    p.add_argument("--x-random", action="store_true")
    p.add_argument("--z-random", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", default=default_threads)
    p.add_argument("--out", required=True, help="bundle path base (writes .json + .bin)")
    p.set_defaults(func=cmd_element)

    p = sub.add_parser("rank", help="numerical chart rank at a seeded generic point")
    p.add_argument("--step", type=float, default=1e-5)
    p.add_argument("--spread", type=float, default=0.6)
    common(p)
    p.set_defaults(func=cmd_rank)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _set_threads(args.threads)
    _echo_config(args)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
