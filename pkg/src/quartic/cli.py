"""Command-line entry point.

Exit status: 0 when the run completed with the expected outcome, 1 when it
completed with anomalies (counterexample, non-convergence, failed --expect),
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import contextlib
import datetime as _dt
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterator, Optional

from . import __version__
from .conjecture import conjecture31_report, scan_conjecture31, scan_family
from .descent import Poly, decompose, jacobi_witness, prove_t2, verify_chain_t2
from .io import atomic_write_json, dumps
from .pell import alpha_power_exact, integer_sqrt
from .reduction import brute_force_index, brute_force_quartic, reduce_equation
from .sieve import (
    SieveConfig,
    build_factor_base,
    escalate,
    expected_survivors,
    run_sieve,
    sieve_report,
)

log = logging.getLogger("quartic")


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``a..b``, ``a..b:odd``, ``a..b:even`` or a single integer."""
    body, _, parity = text.partition(":")
    if parity not in ("", "odd", "even"):
        raise UsageError(f"bad parity filter {parity!r} in range {text!r}")
    try:
        if ".." in body:
            lo_s, hi_s = body.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(body)
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    values = range(lo, hi + 1)
    if parity == "odd":
        return [v for v in values if v % 2]
    if parity == "even":
        return [v for v in values if v % 2 == 0]
    return list(values)


def _parse_expect(items: list[str]) -> list[tuple[str, object]]:
    out = []
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep:
            raise UsageError(f"--expect needs KEY=VALUE, got {item!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        out.append((key, value))
    return out


@contextlib.contextmanager
def _mapper(jobs: int) -> Iterator[Callable]:
    if jobs <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield lambda fn, items: pool.map(fn, items, chunksize=4)


def _cache_dir(args) -> Optional[Path]:
    path = args.cache_dir or os.environ.get("QS_CACHE_DIR")
    return Path(path) if path else None


# --- subcommands; each returns (report, anomalies) ---


def cmd_sieve(args, mapper):
    fixed = args.r is not None or args.s is not None
    if fixed and (args.max_r is not None or args.max_s is not None):
        raise UsageError("use either --r/--s or --max-r/--max-s")
    exclude = not args.all_primes
    if fixed:
        cfg = SieveConfig(args.t, args.m, args.r or 0, args.s or 0, args.prime_bound, exclude)
        fb = build_factor_base(cfg, _cache_dir(args))
        outcome = run_sieve(fb, args.m)
        converged = outcome.survivors_mod_m == expected_survivors(args.t, args.m)
        report = sieve_report(outcome, cfg.r, cfg.s, converged, fb.primes)
    else:
        res = escalate(
            args.t,
            args.m,
            4 if args.max_r is None else args.max_r,
            3 if args.max_s is None else args.max_s,
            args.prime_bound,
            _cache_dir(args),
            exclude_modulus_primes=exclude,
        )
        report = sieve_report(res.outcome, res.r, res.s, res.converged, res.factor_base.primes)
        report["attempts"] = res.attempts
        converged = res.converged
    report["expected_mod_m"] = expected_survivors(args.t, args.m)
    return report, [] if converged else ["sieve did not converge to the unavoidable classes"]


def cmd_prove_t2(args, mapper):
    if args.n_bound < 841:
        raise UsageError("--n-bound must be at least 841")
    proof = prove_t2(args.n_bound, mapper)
    report = proof.to_json(sieve_report_ref="t=2, m=840, r=1, s=0, prime_bound=10000")
    report["sieve"]["factor_base_size"] = len(build_factor_base(SieveConfig(2, 840, 1, 0, 10_000)).primes)
    return report, [] if proof.verdict.startswith("only") else ["proof incomplete"]


def cmd_descent(args, mapper):
    if args.poly is None:
        if args.t != 2:
            raise UsageError("--poly is required unless --t 2")
        cert = verify_chain_t2(args.n)
        report = {"schema": 1, **cert.to_json()}
        return report, [] if cert.valid else ["certificate invalid"]
    try:
        poly = Poly.parse(args.poly)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    dec = decompose(args.n)
    N = poly(alpha_power_exact(args.t, dec.b).p)
    value = jacobi_witness(args.t, args.n, poly, dec.b)
    report = {
        "schema": 1,
        "t": args.t,
        "n": args.n,
        "w": dec.w,
        "c": dec.c,
        "d": dec.d,
        "a": dec.a,
        "b": dec.b,
        "poly": str(poly),
        "witness_modulus": str(N),
        "jacobi_value": value,
        "valid": value == -1,
    }
    return report, [] if value == -1 else [f"jacobi value {value}"]


def cmd_scan(args, mapper):
    signs = {"plus": ["+"], "minus": ["-"], "both": ["+", "-"]}[args.sign]
    i_range, w_range = parse_range(args.i), parse_range(args.w)
    scans = [scan_family(args.d, i_range, w_range, s, mapper) for s in signs]
    bodies = [s.to_json() for s in scans]
    report = bodies[0] if len(bodies) == 1 else {"schema": 1, "d": args.d, "scans": bodies}
    n_exc = sum(len(s.exceptions) for s in scans)
    return report, [f"{n_exc} exceptions"] if n_exc else []


def cmd_conjecture31(args, mapper):
    i_range = parse_range(args.i)
    if any(i % 2 == 0 or i < 1 for i in i_range):
        raise UsageError("--i must contain only odd positive values (use a..b:odd)")
    results = scan_conjecture31(i_range, parse_range(args.w), mapper)
    report = conjecture31_report(results)
    return report, [f"{len(report['exceptions'])} exceptions"] if report["exceptions"] else []


def cmd_reduce(args, mapper):
    rep = reduce_equation(args.A, args.B)
    anomalies = [] if rep.solvable and not rep.degenerate else [rep.note]
    return rep.to_json(), anomalies


def cmd_brute(args, mapper):
    if args.t is not None:
        if args.n_bound is None:
            raise UsageError("brute --t needs --n-bound")
        idx = brute_force_index(args.t, args.n_bound)
        sols = []
        for n in idx:
            a = alpha_power_exact(args.t, n)
            sols.append([integer_sqrt(a.p)[0], a.q])
        report = {
            "schema": 1,
            "t": args.t,
            "n_bound": args.n_bound,
            "square_indices": idx,
            "solutions": [[str(x), str(y)] for x, y in sols],
        }
        return report, []
    if None in (args.A, args.B, args.x_bound):
        raise UsageError("brute needs either --t/--n-bound or --A/--B/--x-bound")
    sols = brute_force_quartic(args.A, args.B, args.x_bound)
    report = {
        "schema": 1,
        "A": args.A,
        "B": args.B,
        "x_bound": args.x_bound,
        "solutions": [[x, str(y)] for x, y in sols],
    }
    return report, []


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--cache-dir", help="factor-base cache (env QS_CACHE_DIR)")
    common.add_argument(
        "--expect", action="append", default=[], metavar="KEY=JSON", help="fail with exit 1 unless report[KEY] == JSON"
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="quartic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", parents=[common], help="factor base and residue-class sieve")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--m", type=int, default=840)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--max-r", type=int)
    p.add_argument("--max-s", type=int)
    p.add_argument("--prime-bound", type=int, default=100_000)
    p.add_argument("--all-primes", action="store_true", help="keep primes dividing M in the factor base")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("prove-t2", parents=[common], help="certify 3x^4 - 2y^2 = 1 up to an index bound")
    p.add_argument("--n-bound", type=int, required=True)
    p.set_defaults(func=cmd_prove_t2)

    p = sub.add_parser("descent", parents=[common], help="certificate for a single index")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poly", help="linear:c1,c0 or quad:c2,c1,c0")
    p.set_defaults(func=cmd_descent)

    p = sub.add_parser("scan", parents=[common], help="scan a polynomial family")
    p.add_argument("--d", type=int, choices=(2, 3, 4, 6), required=True)
    p.add_argument("--i", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--sign", choices=("plus", "minus", "both"), default="both")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("conjecture31", parents=[common], help="evaluate the d=3 conjecture")
    p.add_argument("--i", required=True)
    p.add_argument("--w", required=True)
    p.set_defaults(func=cmd_conjecture31)

    p = sub.add_parser("reduce", parents=[common], help="map Ax^4 - By^2 = 1 to its canonical t")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("brute", parents=[common], help="brute-force solution oracles")
    p.add_argument("--t", type=int)
    p.add_argument("--n-bound", type=int)
    p.add_argument("--A", type=int)
    p.add_argument("--B", type=int)
    p.add_argument("--x-bound", type=int)
    p.set_defaults(func=cmd_brute)
    return parser


def _glue_ranges(argv: list[str]) -> list[str]:
    # argparse reads "-25..25" as an option; rewrite "--w -25..25" to "--w=-25..25"
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in RANGE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


RANGE_FLAGS = ("--i", "--w")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_ranges(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    started = _dt.datetime.now(_dt.timezone.utc)
    t0 = time.perf_counter()
    try:
        expects = _parse_expect(args.expect)
        with _mapper(args.jobs) as mapper:
            report, anomalies = args.func(args, mapper)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2

    for key, want in expects:
        got = report.get(key, None)
        if got != want:
            anomalies.append(f"expectation failed: {key}={json.dumps(got)} (expected {json.dumps(want)})")

    report["meta"] = {
        "version": __version__,
        "command": args.command,
        "started": started.isoformat(timespec="seconds"),
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }
    if args.out:
        atomic_write_json(args.out, report)
    else:
        sys.stdout.write(dumps(report))
    for msg in anomalies:
        print(f"{parser.prog}: anomaly: {msg}", file=sys.stderr)
    return 1 if anomalies else 0


if __name__ == "__main__":
    sys.exit(main())
