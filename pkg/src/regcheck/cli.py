"""``regcheck`` command line.

Exit codes: 0 Regular (or success), 1 Irregular, 3 Undecided, 2 bad input or
failed continuity check.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import io
from .bench import PERTURB_DISTS, run_bench
from .coons import BlendingFunction, blend_bound_check, coons_to_bezier, validate_continuity
from .jacobian import jacobian_coeffs, max_reconstruction_error, set_threads
from .splines import BSplineVolume, bezier_extract, verify_bspline
from .verify import IRREGULAR, REGULAR, UNDECIDED, SPLIT_RULES, VerifyConfig, verify_volume

EXIT_CODES = {REGULAR: 0, IRREGULAR: 1, UNDECIDED: 3}
EXIT_BAD_INPUT = 2


def _blend_arg(text: str):
    if text in ("linear", "cubic"):
        return text
    try:
        return {"alpha": [float(x) for x in text.split(",")]}
    except ValueError:
        raise argparse.ArgumentTypeError(f"blend must be linear, cubic or comma-separated alphas, got {text!r}") from None


def _degrees_arg(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",")]


def cmd_coons(args) -> int:
    b, blend = io.boundary_from_json(io.read_json(args.boundary))
    if args.blend is not None:
        blend = BlendingFunction.parse(args.blend)
    rep = validate_continuity(b.elevated(b.common_degrees(blend.degree)), args.eps_edge)
    if not rep.passed:
        print(f"continuity check failed (eps_edge={args.eps_edge:g}):", file=sys.stderr)
        print(rep.format(), file=sys.stderr)
        return EXIT_BAD_INPUT
    print(f"continuity: 12/12 edges within {args.eps_edge:g} (max deviation {rep.max_deviation:.3e})")
    vol = coons_to_bezier(b, blend, check=False)
    print(f"blend: {blend.kind}  degrees: {vol.degrees}")
    if args.bound_check != "none":
        bc = blend_bound_check(b, blend, mode=args.bound_check)
        bd = bc.bounds
        print(
            f"bound check ({args.bound_check}): {'satisfied' if bc.satisfied else 'inconclusive'}  "
            f"F={bd.gap_bound:.6g} M={bd.tangent_bound:.6g} tau={bd.tangent_det_lower:.6g}"
        )
    io.write_json(args.output, io.volume_to_json(vol))
    print(f"wrote {args.output}")
    return 0


def cmd_coeffs(args) -> int:
    vol = io.volume_from_json(io.read_json(args.volume))
    jc = jacobian_coeffs(vol)
    print(f"min coefficient {jc.min_coeff!r} at index {jc.min_index}")
    if args.output:
        io.save_coeffs(args.output, jc)
        print(f"wrote {args.output}")
    return 0


def cmd_verify(args) -> int:
    cfg = VerifyConfig(max_depth=args.max_depth, tol=args.tol, split_rule=args.split_rule)
    obj = io.load_volume_like(args.input)
    if isinstance(obj, BSplineVolume):
        res = verify_bspline(obj, cfg)
        status = res.overall
        print(f"elements: {len(res.per_patch)}  status: {status}  time: {res.total_elapsed_ms:.3f} ms")
        for i, c in enumerate(res.per_patch):
            if c.status != REGULAR:
                w = "" if c.witness is None else f" witness {list(c.witness)}"
                print(f"  element {i}: {c.status}{w}")
        payload = res.to_json()
    else:
        cert = verify_volume(obj, cfg)
        status = cert.status
        print(
            f"status: {status}  min_coeff: {cert.min_coeff!r}  cells: {cert.cells_processed}  "
            f"depth: {cert.max_depth}  time: {cert.elapsed_ms:.3f} ms"
        )
        if cert.witness is not None:
            print(f"witness: {list(cert.witness)}")
        payload = cert.to_json()
    if args.output:
        io.write_json(args.output, payload)
    return EXIT_CODES[status]


def cmd_oracle(args) -> int:
    vol = io.volume_from_json(io.read_json(args.volume))
    err = max_reconstruction_error(vol, args.samples)
    print(f"max |reconstructed - direct| over {args.samples}^3 grid: {err:.3e}")
    return 0


def cmd_bench(args) -> int:
    if max(args.degrees) > 10:
        print("warning: degrees above 10 take a long time", file=sys.stderr)
    res = run_bench(args.degrees, args.trials, args.seed, args.perturb_dist)
    text = res.to_csv()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(
        f"seed={res.seed} trials={res.trials} perturb={res.perturb_dist} workload_sha256={res.workload_digest}",
        file=sys.stderr if not args.output else sys.stdout,
    )
    return 0


def cmd_extract(args) -> int:
    obj = io.load_volume_like(args.bspline)
    if not isinstance(obj, BSplineVolume):
        print("input is not a B-spline volume file", file=sys.stderr)
        return EXIT_BAD_INPUT
    elements = bezier_extract(obj)
    io.write_json(args.output, {"elements": [io.element_to_json(e) for e in elements]})
    print(f"extracted {len(elements)} elements to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regcheck", description="Jacobian regularity checks for Bezier and B-spline volumes.")
    p.add_argument("--threads", type=int, default=None, help="kernel threads (default: REGCHECK_THREADS or all cores)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("coons", help="build a Coons Bezier volume from six boundary faces")
    s.add_argument("boundary")
    s.add_argument("--blend", type=_blend_arg, default=None, help="linear, cubic or alphas like 0,0.3,0.7,1")
    s.add_argument("--eps-edge", type=float, default=1e-9)
    s.add_argument("--bound-check", choices=("none", "rigorous", "sampled"), default="none")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_coons)

    s = sub.add_parser("coeffs", help="Bernstein coefficients of the Jacobian determinant")
    s.add_argument("volume")
    s.add_argument("-o", "--output", help=".json or .bin")
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("verify", help="certify regularity (exit 0 Regular, 1 Irregular, 3 Undecided)")
    s.add_argument("input", help="Bezier or B-spline volume JSON")
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--max-depth", type=int, default=8)
    s.add_argument("--split-rule", choices=SPLIT_RULES, default="all")
    s.add_argument("-o", "--output", help="certificate JSON")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oracle", help="compare coefficient reconstruction with the direct determinant")
    s.add_argument("volume")
    s.add_argument("--samples", type=int, default=101)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", help="time the coefficient kernel per degree")
    s.add_argument("--degrees", type=_degrees_arg, default=list(range(1, 11)), help="e.g. 1..10 or 2,3,5")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--perturb-dist", choices=PERTURB_DISTS, default="uniform")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("extract", help="split a B-spline volume into Bezier elements")
    s.add_argument("bspline")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_extract)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    threads = args.threads if args.threads is not None else os.environ.get("REGCHECK_THREADS")
    set_threads(int(threads) if threads else None)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
