"""Command-line surface: per-knot queries, scans, and witness generation.

Exit codes: 0 ok, 1 bound violation (a counterexample), 2 usage error,
3 internal invariant failure or universal witness non-convergence, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import scan as scan_mod
from .deform import build_deformation, parabolic_root_intervals, witnesses_for
from .exactpoly import refine
from .riley import verify_conjecture
from .twobridge import InvariantViolation, normalize

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3
EXIT_IO = 4


def _fraction_args(sub):
    sub.add_argument("p", type=int, help="odd determinant > 1")
    sub.add_argument("q", type=int, help="odd numerator coprime to p")
    sub.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rileypoly",
        description="Riley polynomials of 2-bridge knots: exact real-root "
        "verification and elliptic-trace witnesses",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    s = sp.add_parser("poly", help="print the Riley polynomial")
    _fraction_args(s)

    s = sp.add_parser("invariants", help="signature, determinant, bound")
    _fraction_args(s)

    s = sp.add_parser("roots", help="isolating intervals for the real roots")
    _fraction_args(s)
    s.add_argument("--width", type=str, default=None,
                   help="refine intervals to at most this rational width")

    s = sp.add_parser("verify", help="check the real-root lower bound")
    _fraction_args(s)

    s = sp.add_parser("scan", help="verify every fraction up to pmax")
    s.add_argument("--pmax", type=int, required=True)
    s.add_argument("--jobs", type=int, default=scan_mod.default_jobs())
    s.add_argument("--dedup", action="store_true",
                   help="skip q' = q^(+-1) mod p duplicates")
    s.add_argument("--out", type=str, default=None, help="JSONL output path")
    s.add_argument("--resume", action="store_true",
                   help="reuse complete records already in --out")
    s.add_argument("--timings", action="store_true",
                   help="include per-record timings (breaks byte-determinism)")
    s.add_argument("--no-isolate", action="store_true",
                   help="skip root isolation (records get empty intervals)")

    s = sp.add_parser("witness", help="elliptic-trace witnesses near real roots")
    _fraction_args(s)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int, default=None, help="single cover order")
    g.add_argument("--nrange", type=str, default=None, help="orders A:B inclusive")
    s.add_argument("--tol", type=float, default=1e-9)

    return ap


def _norm_or_exit(p: int, q: int):
    try:
        return normalize(p, q)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def cmd_poly(args) -> int:
    k = _norm_or_exit(args.p, args.q)
    rep = verify_conjecture(k, isolate=False)
    if args.json:
        print(json.dumps({
            "p": k.p, "q_input": args.q, "q_canonical": k.q,
            "degree": rep.lam.degree,
            "lambda_coeffs": [str(c) for c in rep.lam.coeffs],
        }))
    else:
        print(rep.lam.pretty())
        print(f"coeffs (ascending): {list(rep.lam.coeffs)}")
    return EXIT_OK


def cmd_invariants(args) -> int:
    k = _norm_or_exit(args.p, args.q)
    rep = verify_conjecture(k, isolate=False)
    if args.json:
        print(json.dumps({
            "p": k.p, "q_input": args.q, "q_canonical": k.q, "n": rep.n,
            "sigma": rep.sigma, "determinant": rep.determinant,
            "bound": rep.bound, "congruence_ok": rep.congruence_ok,
        }))
    else:
        print(f"p/q = {k.p}/{k.q}  (n = {rep.n})")
        print(f"sigma = {rep.sigma}")
        print(f"determinant = {rep.determinant}")
        print(f"real-root bound |sigma|/2 = {rep.bound}")
    return EXIT_OK


def cmd_roots(args) -> int:
    k = _norm_or_exit(args.p, args.q)
    width = Fraction(args.width) if args.width else None
    rep = verify_conjecture(k, isolate=True, refine_width=width)
    if args.json:
        print(json.dumps({
            "p": k.p, "q_canonical": k.q,
            "real_root_count": rep.real_root_count,
            "root_intervals": [[str(iv.lo), str(iv.hi)] for iv in rep.roots],
        }))
    else:
        if not rep.roots:
            print("no real roots")
        for iv in rep.roots:
            print(f"[{iv.lo}, {iv.hi}]  ~ {float(iv.midpoint):.12g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    k = _norm_or_exit(args.p, args.q)
    rep = verify_conjecture(k, isolate=True)
    payload = {
        "p": k.p, "q_input": args.q, "q_canonical": k.q,
        "sigma": rep.sigma, "bound": rep.bound,
        "real_root_count": rep.real_root_count,
        "satisfied": rep.satisfied, "strict": rep.gap > 0,
    }
    if args.json:
        print(json.dumps(payload))
    else:
        verdict = "satisfied" if rep.satisfied else "VIOLATED"
        extra = " (strict inequality)" if rep.satisfied and rep.gap > 0 else ""
        print(f"{k.p}/{k.q}: real roots {rep.real_root_count} >= bound "
              f"{rep.bound}: {verdict}{extra}")
    if not rep.satisfied:
        print("counterexample data:", file=sys.stderr)
        print(json.dumps({
            **payload,
            "lambda_coeffs": [str(c) for c in rep.lam.coeffs],
            "root_intervals": [[str(iv.lo), str(iv.hi)] for iv in rep.roots],
        }), file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_scan(args) -> int:
    cfg = scan_mod.ScanConfig(
        pmax=args.pmax,
        jobs=args.jobs,
        dedup=args.dedup,
        out=args.out,
        resume=args.resume,
        include_timings=args.timings,
        isolate=not args.no_isolate,
    )
    try:
        summary = scan_mod.run_scan(cfg)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(scan_mod.format_summary(summary))
    return EXIT_OK if summary.ok else EXIT_VIOLATION


def _parse_orders(args) -> list:
    if args.n is not None:
        return [args.n]
    try:
        lo, hi = args.nrange.split(":")
        orders = list(range(int(lo), int(hi) + 1))
        if not orders or orders[0] < 3:
            raise ValueError
        return orders
    except ValueError:
        print("error: --nrange must be A:B with 3 <= A <= B", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def cmd_witness(args) -> int:
    k = _norm_or_exit(args.p, args.q)
    orders = _parse_orders(args)
    if any(n < 3 for n in orders):
        print("error: orders must be >= 3", file=sys.stderr)
        return EXIT_USAGE
    deformation = build_deformation(k)
    roots = parabolic_root_intervals(deformation)
    if not roots:
        print("no real parabolic roots; witnesses need sigma != 0, "
              "which forces at least one real root")
        return EXIT_OK
    witnesses = witnesses_for(deformation, orders, tol=args.tol)
    payload = {
        "p": k.p, "q_canonical": k.q,
        "real_parabolic_roots": [[str(iv.lo), str(iv.hi)] for iv in roots],
        "witnesses": [w.to_dict() for w in witnesses],
    }
    converged_orders = sorted({w.n for w in witnesses if w.converged})
    payload["smallest_converged_n"] = converged_orders[0] if converged_orders else None
    print(json.dumps(payload, indent=2))
    if not any(w.converged for w in witnesses):
        print("no witness converged for any requested order", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


_HANDLERS = {
    "poly": cmd_poly,
    "invariants": cmd_invariants,
    "roots": cmd_roots,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "witness": cmd_witness,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except InvariantViolation as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ArithmeticError as exc:
        print(f"internal numeric failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
