"""Command line entry point: ``subdiff run | kernel | weights``."""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import _kernels
from .errors import AccuracyWarning, SubdiffError
from .harness import CaseFailure, builtin_ids, emit, load_cases, run_cases, write_atomic
from .oracle import ContourSpec, kernel_e
from .weights import Scheme, weights


def _error(record: dict, code: int) -> int:
    print(json.dumps(record), file=sys.stderr)
    return code


def cmd_run(args) -> int:
    cases = load_cases(args.case)
    reports = run_cases(cases, workers=args.workers)
    text = emit(reports, args.format)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_kernel(args) -> int:
    spec = ContourSpec(theta=args.theta, nodes=args.nodes)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AccuracyWarning)
        value = kernel_e(args.t, args.lam, args.alpha, spec)
    rec = {"alpha": args.alpha, "lambda": args.lam, "t": args.t, "value": value}
    if caught:
        rec["warning"] = str(caught[-1].message)
    print(json.dumps(rec))
    return 0


def cmd_weights(args) -> int:
    seq = weights(Scheme.parse(args.scheme), args.alpha, args.tau, args.n)
    for k, w in enumerate(seq.values):
        print(f"{k},{w:.17e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="subdiff",
        description="Finite-difference solver and convergence studies for the "
        "time-fractional sub-diffusion equation.",
    )
    p.add_argument("--version", action="version", version="%(prog)s 0.1.0 (" + _kernels.BACKEND + ")")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a convergence study from a case file or builtin id")
    r.add_argument("--case", required=True, help=f"case file path or builtin id ({', '.join(builtin_ids())})")
    r.add_argument("--format", choices=("csv", "json", "pretty"), default="csv")
    r.add_argument("--out", help="write the report here (atomically) instead of stdout")
    r.add_argument("--workers", type=int, default=1, help="cases run in parallel (default 1)")
    r.set_defaults(func=cmd_run)

    k = sub.add_parser("kernel", help="evaluate the contour-quadrature solution kernel")
    k.add_argument("--alpha", type=float, required=True)
    k.add_argument("--lambda", dest="lam", type=float, required=True)
    k.add_argument("--t", type=float, required=True)
    k.add_argument("--theta", type=float, default=ContourSpec.theta)
    k.add_argument("--nodes", type=int, default=ContourSpec.nodes)
    k.set_defaults(func=cmd_kernel)

    w = sub.add_parser("weights", help="dump convolution weights as k,w_k lines")
    w.add_argument("--scheme", choices=("l1bar", "sbdbar"), required=True)
    w.add_argument("--alpha", type=float, required=True)
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--tau", type=float, default=1.0)
    w.set_defaults(func=cmd_weights)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    np.seterr(all="ignore")
    try:
        return args.func(args)
    except CaseFailure as exc:
        return _error(exc.record(), 3)
    except SubdiffError as exc:
        return _error({"error": type(exc).__name__, "message": str(exc)}, 2)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
