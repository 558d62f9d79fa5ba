"""Command-line front end: bounds, generate, discrepancy, convergence."""

from __future__ import annotations

import argparse
import sys

import numpy as np


def _fmt(x: float) -> str:
    return format(x, ".17g")


def load_points(path) -> np.ndarray:
    """Read a point file in either layout emitted by ``generate``."""
    with open(path) as f:
        first = f.readline()
        if first.startswith("index,"):
            data = np.loadtxt(f, delimiter=",", ndmin=2)
            return data[:, 1:]
        rows = [first] + f.readlines()
    return np.loadtxt(rows, ndmin=2)


def _write_points(points: np.ndarray, stream, fmt: str) -> None:
    if fmt == "csv":
        stream.write("index," + ",".join(f"x{m}" for m in range(points.shape[1])) + "\n")
        for i, row in enumerate(points):
            stream.write(f"{i}," + ",".join(_fmt(v) for v in row) + "\n")
    else:
        for row in points:
            stream.write(" ".join(_fmt(v) for v in row) + "\n")


def _open_out(args):
    if getattr(args, "out", None):
        return open(args.out, "w"), True
    return sys.stdout, False


def cmd_bounds(args) -> int:
    from .kdtree import cell_bounds, exact_cell_bounds

    cell = cell_bounds(args.n, args.d, args.i)
    lo, hi = exact_cell_bounds(args.n, args.d, args.i)
    print(
        "lower", " ".join(_fmt(v) for v in cell.lower),
        "| upper", " ".join(_fmt(v) for v in cell.upper),
    )
    print(
        "lower", " ".join(str(v) for v in lo),
        "| upper", " ".join(str(v) for v in hi),
    )
    return 0


def cmd_generate(args) -> int:
    from .samplers import SamplerSpec, generate

    spec = SamplerSpec(args.sampler, args.seed, args.randomization)
    points = generate(spec, args.n, args.d).points
    stream, close = _open_out(args)
    try:
        _write_points(points, stream, args.format)
    finally:
        if close:
            stream.close()
    return 0


def cmd_discrepancy(args) -> int:
    from .discrepancy import (
        l2_star_discrepancy,
        linf_star_discrepancy,
        mean_l2_discrepancy,
        stratified_linf_bound,
    )
    from .samplers import SamplerSpec, generate

    if (args.points is None) == (args.sampler is None):
        raise ValueError("give exactly one of --points or --sampler")
    if args.points is not None:
        pts = load_points(args.points)
        n, d = pts.shape
        if args.reps != 1:
            raise ValueError("--reps applies to generated sets, not point files")
        value = l2_star_discrepancy(pts) if args.l2 else linf_star_discrepancy(pts)
        label = "l2_star" if args.l2 else "linf_star"
    else:
        if args.n is None or args.d is None:
            raise ValueError("--sampler needs --n and --d")
        n, d = args.n, args.d
        spec = SamplerSpec(args.sampler, args.seed, args.randomization)
        if args.reps > 1:
            if not args.l2:
                raise ValueError("--reps > 1 is only supported with --l2")
            value = mean_l2_discrepancy(spec, n, d, reps=args.reps, seed=args.seed)
            label = f"mean_l2_star[{args.reps}]"
        else:
            pts = generate(spec, n, d).points
            value = l2_star_discrepancy(pts) if args.l2 else linf_star_discrepancy(pts)
            label = "l2_star" if args.l2 else "linf_star"
    print(label, _fmt(value))
    if args.bound:
        print("stratified_bound", _fmt(stratified_linf_bound(n, d)))
    return 0


def cmd_convergence(args) -> int:
    from .harness import (
        ExperimentPlan,
        IntegrandDescriptor,
        _parse_sampler,
        load_plan,
        run_plan,
        write_csv,
    )

    if args.plan is not None:
        plan = load_plan(args.plan)
    else:
        missing = [
            flag
            for flag, value in (
                ("--samplers", args.samplers),
                ("--integrand", args.integrand),
                ("--k", args.k),
                ("--d", args.d),
                ("--counts", args.counts),
            )
            if value is None
        ]
        if missing:
            raise ValueError(f"without --plan, also give {' '.join(missing)}")
        plan = ExperimentPlan(
            samplers=tuple(_parse_sampler(s, args.seed) for s in args.samplers.split(",")),
            integrands=(IntegrandDescriptor(args.integrand, args.k, args.d, args.seed),),
            counts=tuple(int(c) for c in args.counts.split(",")),
            reps=args.reps,
            master_seed=args.seed,
        )
    records = run_plan(plan, threads=args.threads)
    stream, close = _open_out(args)
    try:
        write_csv(records, stream)
    finally:
        if close:
            stream.close()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdjitter",
        description="Jittered kd-tree stratified sampling, discrepancy, and MSE convergence",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="print one cell of the equal-volume kd partition")
    p.add_argument("--n", type=int, required=True, help="stratum count")
    p.add_argument("--d", type=int, required=True, help="dimension")
    p.add_argument("--i", type=int, required=True, help="cell index")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("generate", help="write an n-point sample set")
    p.add_argument("--sampler", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--randomization", choices=("none", "shift"), default="none")
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("discrepancy", help="star discrepancy of a set")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--l2", action="store_true", help="L2 star discrepancy")
    mode.add_argument("--linf-exact", action="store_true", help="exact sup-norm star discrepancy")
    p.add_argument("--points", help="point file (from `generate`)")
    p.add_argument("--sampler")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--randomization", choices=("none", "shift"), default="none")
    p.add_argument("--reps", type=int, default=1, help="average --l2 over this many realizations")
    p.add_argument("--bound", action="store_true", help="also print the stratified worst-case bound")
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("convergence", help="MSE convergence study, CSV output")
    p.add_argument("--plan", help="TOML plan file")
    p.add_argument("--samplers", help="comma list, e.g. kdt,random,sobol+shift")
    p.add_argument("--integrand", choices=("gmm", "pwconst"))
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--counts", help="comma list of sample counts, strictly increasing")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_convergence)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - unexpected failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
