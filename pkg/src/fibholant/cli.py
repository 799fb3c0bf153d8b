"""Command-line entry point.

Exit status: 0 on success, 1 on domain errors (bad documents, failed checks,
non-Fibonacci input), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io
from .bases import random_basis
from .engine import holant_eval, params_domain, verify_gate
from .errors import HolantError
from .fibonacci_d3 import FibParamsD3, d3_fit_params, d3_recover_basis
from .fibonacci_d4 import d4_check_side_relations, d4_fit_params
from .generators import basis_params
from .oracle import DEFAULT_CAP, holant_bruteforce
from .selfcheck import run_bench, run_selfcheck
from .signature import Tolerance, power_sum_signature

log = logging.getLogger("fibholant")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _tol(args) -> Tolerance:
    return Tolerance(rel=args.tolerance)


def cmd_eval(args) -> int:
    grid = io.parse_grid(_read(args.grid))
    if args.oracle:
        value = holant_bruteforce(grid, cap=args.cap, workers=args.workers)
    else:
        P = io.parse_params(_read(args.params))
        value = holant_eval(grid, P, strict=args.strict, order=args.order, tol=_tol(args))
    print(json.dumps(io.emit_complex(value)))
    return 0


def cmd_verify(args) -> int:
    d, sigs = io.parse_signature_set(_read(args.signatures))
    P = io.parse_params(_read(args.params))
    if params_domain(P) != d:
        raise HolantError(f"parameters are for domain {params_domain(P)}, signatures for {d}")
    tol = _tol(args)
    report = {name: verify_gate(sig, P, tol) for name, sig in sigs.items()}
    doc = {"ok": all(report.values()), "gates": report}
    if d == 4:
        doc["side_relations"] = d4_check_side_relations(P, tol)
    print(io.dumps(doc))
    return 0 if doc["ok"] else 1


def cmd_fit(args) -> int:
    d, sigs = io.parse_signature_set(_read(args.signatures))
    if d == 3:
        P = d3_fit_params(list(sigs.values()), _tol(args))
    elif d == 4:
        P = d4_fit_params(list(sigs.values()), _tol(args))
    else:
        raise HolantError(f"fitting is only defined for domains 3 and 4, got {d}")
    print(io.dumps(io.emit_params(P)))
    return 0


def cmd_gen(args) -> int:
    if args.basis:
        basis = io.parse_basis(_read(args.basis))
    else:
        rng = np.random.default_rng(args.seed)
        basis = random_basis(args.domain, rng, complex_entries=not args.real)
    basis.check(_tol(args))
    d = len(basis.weights)
    sig = power_sum_signature(basis.weights, basis.vectors, args.arity)
    doc = io.emit_signature_set(d, {args.name: sig})
    doc["params"] = io.emit_params(basis_params(basis))
    doc["basis"] = io.emit_basis(basis)
    print(io.dumps(doc))
    return 0


def cmd_recover(args) -> int:
    P = io.parse_params(_read(args.params))
    if not isinstance(P, FibParamsD3):
        raise HolantError("basis recovery is only available for domain 3")
    report = d3_recover_basis(P, _tol(args))
    doc = {
        "roots": [io.emit_complex(r) for r in report.roots],
        "basis": None
        if report.matrix is None
        else [[io.emit_complex(v) for v in row] for row in report.matrix],
        "diagnostic": report.diagnostic,
    }
    print(io.dumps(doc))
    return 0


def cmd_selfcheck(args) -> int:
    domains = (3, 4) if args.domain is None else (args.domain,)
    summary = run_selfcheck(seed=args.seed, count=args.count, domains=domains, tol=_tol(args))
    print(io.dumps(summary.as_dict()))
    return 0 if summary.ok else 1


def cmd_bench(args) -> int:
    rows = run_bench(args.seed, args.domain, args.sizes)
    print(io.dumps(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibholant", description="Holant values for generalized Fibonacci gate grids."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=1e-9, help="relative tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="Holant value of a grid document")
    p.add_argument("grid")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--params", help="parameter document (polynomial-time engine)")
    how.add_argument("--oracle", action="store_true", help="brute-force enumeration")
    p.add_argument("--strict", action="store_true", help="re-verify every intermediate gate")
    p.add_argument("--order", choices=["input", "min-arity"], default="input")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="oracle enumeration cap")
    p.add_argument("--workers", type=int, default=1, help="oracle worker threads")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", parents=[common], help="check signatures against parameters")
    p.add_argument("signatures")
    p.add_argument("--params", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", parents=[common], help="fit shared parameters to signatures")
    p.add_argument("signatures")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("gen", parents=[common], help="signature from an orthogonal basis")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--domain", type=int, choices=[3, 4], default=3)
    p.add_argument("--basis", help="basis document; random (seeded) when omitted")
    p.add_argument("--real", action="store_true", help="real random basis")
    p.add_argument("--name", default="g")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("recover-basis", parents=[common], help="domain-3 basis from parameters")
    p.add_argument("params")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("selfcheck", parents=[common], help="randomised engine/oracle consistency suite")
    p.add_argument("--count", type=int, default=50, help="grids per domain")
    p.add_argument("--domain", type=int, choices=[3, 4])
    p.set_defaults(func=cmd_selfcheck)

    p = sub.add_parser("bench", parents=[common], help="engine vs oracle timing")
    p.add_argument("--domain", type=int, choices=[3, 4], default=3)
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 6, 8, 20, 100])
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fibholant: {exc}", file=sys.stderr)
        return 2
    except HolantError as exc:
        print(f"fibholant: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
