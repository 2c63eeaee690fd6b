"""Command-line front end.

Subcommands map one-to-one onto the library's check layers:

  analyze         weight-family diagnostics (convexity, summation trend)
  compare         k-th-root comparison of two families
  ostrowski       trace-growth function on a radius grid, CSV output
  verify-bounds   finite-order derivative bounds for bumps and blocks
  construct-flat  build and save a flat-superposition layout
  certify         lower-bound certificate (and sharpness scan) for a layout
  counterexample  ratio-step schedule construction and its checks
  selftest        the full acceptance suite

Every run writes a JSON report envelope; grid-like results also land in CSV
files with fixed headers. Exit status: 0 when no check failed, 1 when some
check failed, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .acceptance import run_all
from .blocks import (
    base_lower_check,
    base_upper_check,
    block_lower_check,
    block_upper_check,
    polar_block_bound_check,
    BaseFunction,
)
from .bricks import (
    BrickParams,
    brick_taylor_check,
    polar_brick_bound_check,
)
from .counterexample import counterexample_sequence, full_verification
from .flat import (
    EFunction,
    FlatFunction,
    Layout,
    LayoutError,
    build_layout,
    layout_from_orders,
    lower_bound_certificate,
    sharpness_scan,
)
from .ostrowski import phi_grid, verify_phi_identity
from .reports import ReportBuilder, output_dir, write_csv
from .weights import (
    WeightError,
    closure_diagnostic,
    compare,
    parse_family,
    quasianalyticity_diagnostic,
    square_vs_shift_diagnostic,
)

CERTIFICATE_HEADER = ("lambda", "lhs_log", "rhs_log", "ratio_root")
SHARPNESS_HEADER = ("lambda", "deriv_log", "target_log", "r")
OSTROWSKI_HEADER = ("r", "phi_log", "argmax")
SCHEDULE_HEADER = ("k", "a_k", "b_k", "g_k")


def _family(spec: str):
    try:
        return parse_family(spec)
    except (WeightError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r} ({exc})")


def _orders(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output directory (default $CARLEMAN_OUT or cwd)")


def _finish(rb: ReportBuilder, out: Optional[str], filename: str, quiet: bool = False) -> int:
    path = rb.write(output_dir(out) / filename)
    if not quiet:
        for c in rb.checks:
            print(f"{c.status.upper():10s} {c.name}")
        print(f"report: {path}")
    return 1 if rb.failed else 0


# -- subcommand handlers -----------------------------------------------------

def _cmd_analyze(args) -> int:
    M = args.family
    rb = ReportBuilder(
        "analyze", {"family": M.name, "K": args.K, "seed": None}
    )
    try:
        M.validate(args.K)
        rb.add("log-convexity", True, {"K": args.K})
    except WeightError as exc:
        rb.add("log-convexity", False, {"error": str(exc)})
    clo = closure_diagnostic(M, args.K)
    rb.add_diagnostic("ratio-root-sup", clo)
    qa = quasianalyticity_diagnostic(M, args.K)
    rb.add_diagnostic("summation-trend", qa)
    sq = square_vs_shift_diagnostic(M, args.K // 2)
    rb.add("square-vs-shift-inequality", sq.inequality_ok, sq)
    print(f"{M.name}: summation trend {qa.verdict}")
    return _finish(rb, args.out, "analyze.json")


def _cmd_compare(args) -> int:
    rep = compare(args.N, args.M, args.K)
    rb = ReportBuilder(
        "compare",
        {"N": args.N.name, "M": args.M.name, "K": args.K, "seed": None},
    )
    rb.add_diagnostic("root-comparison", rep)
    print(f"{args.N.name} vs {args.M.name}: {rep.verdict}")
    return _finish(rb, args.out, "compare.json")


def _cmd_ostrowski(args) -> int:
    M = args.family
    if args.r_min <= 0 or args.r_max <= args.r_min:
        print("error: need 0 < r-min < r-max", file=sys.stderr)
        return 2
    lo, hi = math.log(args.r_min), math.log(args.r_max)
    radii = [
        math.exp(lo + (hi - lo) * i / (args.count - 1)) for i in range(args.count)
    ]
    rows = phi_grid(M, radii, horizon=args.horizon)
    rb = ReportBuilder(
        "ostrowski",
        {
            "family": M.name,
            "r_min": args.r_min,
            "r_max": args.r_max,
            "count": args.count,
            "horizon": args.horizon,
            "seed": None,
        },
    )
    saturated = sum(1 for r in rows if r[2] < 0)
    rb.add("grid-computed", True, {"rows": len(rows), "saturated_rows": saturated})
    ident = [verify_phi_identity(M, k) for k in range(1, args.identity_k + 1)]
    rb.add(
        "ratio-identity",
        all(c.ok for c in ident),
        {"k_max": args.identity_k, "worst_residual": max(c.log_residual for c in ident)},
    )
    csv_path = write_csv(output_dir(args.out) / "ostrowski.csv", OSTROWSKI_HEADER, rows)
    print(f"grid: {csv_path}")
    return _finish(rb, args.out, "ostrowski.json")


def _cmd_verify_bounds(args) -> int:
    target = args.target
    rb = ReportBuilder(
        "verify-bounds",
        {
            "target": target,
            "family": args.family.name if target not in ("brick", "polar-brick") else None,
            "q": args.q,
            "m": args.m,
            "rho": args.rho,
            "Dmax": args.Dmax,
            "samples": args.samples,
            "terms": args.terms,
            "seed": args.seed,
        },
    )
    if target == "brick":
        chk = brick_taylor_check(
            [BrickParams(args.q, args.m, args.rho)],
            degree=args.Dmax,
            points=args.samples,
            seed=args.seed,
        )
        rb.add("brick-taylor-bound", chk.ok, chk)
    elif target == "polar-brick":
        radii = max(2, int(math.sqrt(args.samples)))
        angles = max(1, -(-args.samples // radii))
        chk = polar_brick_bound_check(
            [BrickParams(args.q, args.m, args.rho)],
            degree=args.Dmax,
            radii=radii,
            angles=angles,
            seed=args.seed,
        )
        rb.add("polar-brick-bound", chk.ok, chk)
    elif target == "base":
        up = base_upper_check(
            args.family, degree=args.Dmax, points=args.samples,
            terms=args.terms, seed=args.seed,
        )
        rb.add("base-upper-bound", up.ok, up)
        orders = list(range(2, min(2 * args.Dmax, args.terms) + 1, 2))
        low = base_lower_check(args.family, orders, terms=args.terms)
        rb.add("base-lower-bound", all(r.ok for r in low), low)
        h = BaseFunction(args.family, args.terms)
        xs = [i / 4 for i in range(-40, 41)]
        profile = [(x, h.value(x, 0.0), h.value(0.0, x)) for x in xs]
        ppath = write_csv(
            output_dir(args.out) / "base_profile.csv",
            ("x", "h_axis1", "h_axis2"),
            profile,
        )
        print(f"profile: {ppath}")
    elif target == "block":
        geom = [(args.q, args.rho)]
        up = block_upper_check(
            args.family, geom, degree=args.Dmax, points=args.samples,
            terms=args.terms, seed=args.seed,
        )
        rb.add("block-upper-bound", up.ok, up)
        orders = list(range(2, min(2 * args.Dmax, args.terms) + 1, 2))
        low = block_lower_check(args.family, geom, orders, terms=args.terms)
        rb.add("block-lower-bound", all(r.ok for r in low), low)
    elif target == "polar-block":
        radii = max(2, int(math.sqrt(args.samples)))
        angles = max(1, -(-args.samples // radii))
        chk = polar_block_bound_check(
            args.family, [(args.q, args.rho)], degree=args.Dmax,
            radii=radii, angles=angles, terms=args.terms, seed=args.seed,
        )
        rb.add("polar-block-bound", chk.ok, chk)
    return _finish(rb, args.out, "bounds.json")


def _cmd_construct_flat(args) -> int:
    try:
        E = EFunction.parse(args.E)
        if args.orders:
            layout = layout_from_orders(
                args.family, E, args.orders, terms=args.terms
            )
        else:
            layout = build_layout(args.family, E, args.lambda_max, terms=args.terms)
    except (LayoutError, WeightError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    path = output_dir(args.out) / args.gamma
    layout.save(path)
    rb = ReportBuilder(
        "construct-flat",
        {
            "family": args.family.name,
            "E": args.E,
            "lambda_max": args.lambda_max,
            "orders": args.orders,
            "terms": layout.terms,
            "seed": None,
        },
    )
    rb.add(
        "layout-built",
        True,
        {
            "orders": layout.orders,
            "eps": layout.eps,
            "eps_exact": layout.eps_exact,
            "separation_lower": layout.delta_min_lo,
            "file": str(path),
        },
    )
    print(f"layout orders {layout.orders} -> {path}")
    return _finish(rb, args.out, "construct_flat.json")


def _cmd_certify(args) -> int:
    try:
        layout = Layout.load(Path(args.gamma))
    except (OSError, LayoutError, KeyError, ValueError) as exc:
        print(f"error: cannot load layout: {exc}", file=sys.stderr)
        return 2
    fn = FlatFunction(layout)
    cert = lower_bound_certificate(fn)
    rb = ReportBuilder(
        "certify",
        {
            "gamma": str(args.gamma),
            "family": layout.m_family,
            "N": args.N.name if args.N is not None else None,
            "seed": None,
        },
    )
    rb.add(
        "lower-certificate",
        cert.all_ok,
        {
            "orders": layout.orders,
            "lambda0_estimate": cert.lambda0_estimate,
            "rows": cert.rows,
        },
    )
    cpath = write_csv(
        output_dir(args.out) / "certificate.csv", CERTIFICATE_HEADER, cert.csv_rows()
    )
    print(f"certificate: {cpath}")
    if args.N is not None:
        sharp = sharpness_scan(fn, args.N)
        rb.add_diagnostic("sharpness", sharp)
        rows = [
            (
                r.order,
                r.deriv_log,
                math.lgamma(r.order + 1) + args.N.log_weight(r.order),
                r.root,
            )
            for r in sharp.rows
        ]
        spath = write_csv(output_dir(args.out) / "sharpness.csv", SHARPNESS_HEADER, rows)
        print(f"sharpness ({sharp.verdict}): {spath}")
    return _finish(rb, args.out, "certify.json")


def _cmd_counterexample(args) -> int:
    report = full_verification(args.pairs)
    seq = counterexample_sequence(args.pairs)
    rb = ReportBuilder(
        "counterexample", {"pairs": args.pairs, "k_max": args.k_max, "seed": None}
    )
    for name, body in report["checks"].items():
        payload = {k: v for k, v in body.items() if k != "ok"}
        rb.add(name, body["ok"], payload)
    rb.add_diagnostic(
        "schedule-size",
        {
            "entries": report["entry_count"],
            "last_entry_digits": report["last_entry_digits"],
            "build_seconds": report["build_seconds"],
        },
    )
    rows = [
        (k, seq.level(k), seq.b(k), seq.g(k)) for k in range(1, args.k_max + 1)
    ]
    cpath = write_csv(output_dir(args.out) / "schedule.csv", SCHEDULE_HEADER, rows)
    print(f"schedule: {cpath}")
    return _finish(rb, args.out, "counterexample.json")


def _cmd_selftest(args) -> int:
    only = args.only if args.only else None
    results = run_all(only)
    rb = ReportBuilder("selftest", {"only": only, "seed": None})
    for r in results:
        print(r.line())
        rb.add(
            r.name,
            r.ok and r.in_budget,
            {
                "index": r.index,
                "seconds": round(r.seconds, 3),
                "budget": r.budget,
                "detail": r.detail,
                **r.extras,
            },
        )
    code = _finish(rb, args.out, "selftest.json", quiet=True)
    total = sum(r.seconds for r in results)
    n_ok = sum(1 for r in results if r.ok and r.in_budget)
    print(f"{n_ok}/{len(results)} criteria passed in {total:.1f}s")
    return code


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="carleman",
        description="certified finite-order analysis of log-convex weight sequences",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="diagnostics for one weight family")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--K", type=int, default=200)
    _add_out(p)
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("compare", help="k-th-root comparison of two families")
    p.add_argument("--N", type=_family, required=True)
    p.add_argument("--M", type=_family, required=True)
    p.add_argument("--K", type=int, default=200)
    _add_out(p)
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("ostrowski", help="trace-growth function on a radius grid")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--r-min", type=float, default=0.5)
    p.add_argument("--r-max", type=float, default=1e6)
    p.add_argument("--count", type=int, default=40)
    p.add_argument("--horizon", type=int, default=10**6)
    p.add_argument("--identity-k", type=int, default=20)
    _add_out(p)
    p.set_defaults(handler=_cmd_ostrowski)

    p = sub.add_parser("verify-bounds", help="finite-order derivative bounds")
    p.add_argument(
        "--target",
        required=True,
        choices=["brick", "polar-brick", "base", "block", "polar-block"],
    )
    p.add_argument("--family", type=_family, default="gevrey:1")
    p.add_argument("--q", type=_fraction, default=Fraction(2))
    p.add_argument("--m", type=_fraction, default=Fraction(3))
    p.add_argument("--rho", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--Dmax", type=int, default=6)
    p.add_argument("--samples", type=int, default=6)
    p.add_argument("--terms", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(handler=_cmd_verify_bounds)

    p = sub.add_parser("construct-flat", help="build and save a layout")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--E", default="sqrt")
    p.add_argument("--lambda-max", type=int, default=64)
    p.add_argument("--orders", type=_orders, default=None,
                   help="comma-separated explicit orders (skips greedy selection)")
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--gamma", default="layout.json", help="layout filename")
    _add_out(p)
    p.set_defaults(handler=_cmd_construct_flat)

    p = sub.add_parser("certify", help="lower-bound certificate for a layout")
    p.add_argument("--gamma", required=True, help="layout JSON file")
    p.add_argument("--N", type=_family, default=None,
                   help="target family for the sharpness scan")
    _add_out(p)
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("counterexample", help="ratio-step schedule and checks")
    p.add_argument("--pairs", type=int, default=8)
    p.add_argument("--k-max", type=int, default=256)
    _add_out(p)
    p.set_defaults(handler=_cmd_counterexample)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--only", type=_orders, default=None,
                   help="comma-separated criterion indices")
    _add_out(p)
    p.set_defaults(handler=_cmd_selftest)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if isinstance(getattr(args, "family", None), str):
        args.family = _family(args.family)
    try:
        return args.handler(args)
    except (WeightError, LayoutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
