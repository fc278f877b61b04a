"""Command-line entry point: ``qpack mulpoly``, ``qpack paper-examples``, ``qpack gfq``.

Every benchmark writes CSV rows with the header

    algo,p,q,k,d,N,n_q,n_d,mul_add,divisions,table_accesses,wall_time_ns,checksum

Fields that do not apply to an algorithm are left empty.  ``checksum`` is
64-bit FNV-1a folded over the output coefficients (one xor-multiply step per
coefficient), so two algorithms agree on an input iff their checksums do
(up to hash collisions).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .counters import CostReport
from .dqt import DensePoly
from .gfq import FieldTooLarge, build_field, fgdp_dot, gfq_matmul
from .oracle import naive_gfq_dot, naive_gfq_matmul, schoolbook_mul
from .params import NotPrimeError, ParameterError, delayed_bound, is_prime
from .polymul import SCHEDULES, delayed_mul, fqt_mul, fqt_params
from .rng import SplitMix64
from .worked import failures, run_worked_examples

CSV_FIELDS = ["algo", "p", "q", "k", "d", "N", "n_q", "n_d", "mul_add", "divisions",
              "table_accesses", "wall_time_ns", "checksum"]

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def checksum(values) -> int:
    h = FNV_OFFSET
    for c in values:
        h = ((h ^ int(c)) * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass
class BenchRecord:
    algo: str
    p: int
    N: int
    q: int | None = None
    k: int | None = None
    d: int | None = None
    n_q: int | None = None
    n_d: int | None = None
    counters: CostReport = field(default_factory=CostReport)
    wall_time_ns: int = 0
    checksum: int = 0

    def row(self) -> dict:
        out = {}
        for name in CSV_FIELDS:
            if name in ("mul_add", "divisions", "table_accesses"):
                value = getattr(self.counters, name)
            else:
                value = getattr(self, name)
            out[name] = "" if value is None else value
        return out


def write_records(records, path: str | None) -> None:
    if path is None:
        w = csv.DictWriter(sys.stdout, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(r.row() for r in records)
        return
    target = Path(path)
    fresh = not target.exists() or target.stat().st_size == 0
    with target.open("a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        if fresh:
            w.writeheader()
        w.writerows(r.row() for r in records)


def _coeff_list(text: str, p: int) -> DensePoly:
    return DensePoly.reduced([int(x) for x in text.split(",") if x.strip()], p)


def cmd_mulpoly(args) -> int:
    p, N = args.p, args.n
    try:
        if not is_prime(p):
            raise NotPrimeError(f"p = {p} is not prime")
        if N < 0 or args.repeat < 1:
            raise ParameterError("--n must be >= 0 and --repeat >= 1")
        if args.algo == "fqt":
            params = fqt_params(p, args.m, args.d)
        elif args.algo == "delayed":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                n_d = delayed_bound(p, args.m)
            if n_d < 1:
                raise ParameterError(f"n_d*(p-1)^2 < 2^(m+1) admits no n_d >= 1 for p={p}, m={args.m}")
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    rng = SplitMix64(args.seed)
    records = []
    for _ in range(args.repeat):
        if args.a is not None and args.b is not None:
            P, Q = _coeff_list(args.a, p), _coeff_list(args.b, p)
        else:
            P = DensePoly(rng.vector(p, N + 1), p)
            Q = DensePoly(rng.vector(p, N + 1), p)
        counter = CostReport()
        start = time.perf_counter_ns()
        if args.algo == "fqt":
            R = fqt_mul(P, Q, params, schedule=args.schedule, counter=counter)
        elif args.algo == "delayed":
            R = delayed_mul(P, Q, args.m, schedule=args.schedule, counter=counter)
        else:
            R = schoolbook_mul(P, Q)
        elapsed = time.perf_counter_ns() - start
        if not args.no_verify and args.algo != "oracle" and R != schoolbook_mul(P, Q):
            print(f"error: {args.algo} result disagrees with the schoolbook oracle", file=sys.stderr)
            return 1
        rec = BenchRecord(args.algo, p, len(P) - 1, counters=counter, wall_time_ns=elapsed,
                          checksum=checksum(R.coeffs))
        if args.algo == "fqt":
            rec.q, rec.k, rec.d, rec.n_q = params.q, params.k, params.k - 1, params.n_q
        elif args.algo == "delayed":
            rec.n_d = n_d
        records.append(rec)
    write_records(records, args.csv)
    return 0


def cmd_paper_examples(args) -> int:
    checks = run_worked_examples(corrupt=args.inject_fault)
    for check in checks:
        label, expected, got = check
        status = "FAIL" if failures([check]) else "ok  "
        print(f"{status} {label}: expected {expected}, got {got}")
    bad = failures(checks)
    print(f"{len(checks) - len(bad)}/{len(checks)} checks passed")
    return 1 if bad else 0


def cmd_gfq(args) -> int:
    try:
        F = build_field(args.p, args.k, indexing=args.indexing, max_entries=args.cap)
    except FieldTooLarge as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rng = SplitMix64(args.seed)
    common = dict(p=F.p, N=args.len, q=F.q, k=F.k, d=F.k - 1, n_q=F.n_q)
    records = []
    if args.op == "dot":
        v1 = rng.vector(F.order, args.len)
        v2 = rng.vector(F.order, args.len)
        counter = CostReport()
        start = time.perf_counter_ns()
        got = F.to_poly(fgdp_dot(v1, v2, F, counter))
        t_fast = time.perf_counter_ns() - start
        start = time.perf_counter_ns()
        want = naive_gfq_dot([F.to_poly(e) for e in v1], [F.to_poly(e) for e in v2], F.modulus, F.p)
        t_naive = time.perf_counter_ns() - start
        expected_divisions = math.ceil(args.len / F.n_q)
        ok = got == want and counter.divisions == expected_divisions
        print(f"dot agreement: {got == want}; divisions {counter.divisions} "
              f"(expected {expected_divisions})", file=sys.stderr)
    else:
        n = args.len
        A = np.array(rng.vector(F.order, n * n)).reshape(n, n)
        B = np.array(rng.vector(F.order, n * n)).reshape(n, n)
        counter = CostReport()
        start = time.perf_counter_ns()
        C = gfq_matmul(A, B, F, counter)
        t_fast = time.perf_counter_ns() - start
        got = [c for e in C.reshape(-1) for c in F.to_poly(int(e))]
        start = time.perf_counter_ns()
        poly = lambda M: [[F.to_poly(int(e)) for e in row] for row in M]
        naive = naive_gfq_matmul(poly(A), poly(B), F.modulus, F.p)
        t_naive = time.perf_counter_ns() - start
        want = [c for row in naive for e in row for c in e]
        ok = got == want
        print(f"matmul agreement: {ok}", file=sys.stderr)
    records.append(BenchRecord("fgdp", counters=counter, wall_time_ns=t_fast,
                               checksum=checksum(got), **common))
    records.append(BenchRecord("naive_dot", wall_time_ns=t_naive, checksum=checksum(want), **common))
    write_records(records, args.csv)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    mp = sub.add_parser("mulpoly", help="polynomial multiplication benchmark")
    mp.add_argument("--p", type=int, required=True)
    mp.add_argument("--n", type=int, default=100, help="degree of both operands")
    mp.add_argument("--d", type=int, default=None, help="chunk degree (default: densest packing)")
    mp.add_argument("--m", type=int, default=53, help="exact bits of the compute type")
    mp.add_argument("--algo", choices=["fqt", "delayed", "oracle"], default="fqt")
    mp.add_argument("--schedule", choices=SCHEDULES, default="padded")
    mp.add_argument("--seed", type=int, default=0)
    mp.add_argument("--repeat", type=int, default=1)
    mp.add_argument("--csv", default=None, help="append rows to this file (default: stdout)")
    mp.add_argument("--no-verify", action="store_true")
    mp.add_argument("--a", default=None, help="fixed first operand, comma-separated, lowest degree first")
    mp.add_argument("--b", default=None, help="fixed second operand")
    mp.set_defaults(func=cmd_mulpoly)

    pe = sub.add_parser("paper-examples", help="replay the worked examples")
    pe.add_argument("--inject-fault", action="store_true", help="corrupt the correction tables")
    pe.set_defaults(func=cmd_paper_examples)

    gq = sub.add_parser("gfq", help="extension-field dot product / matrix product")
    gq.add_argument("--p", type=int, required=True)
    gq.add_argument("--k", type=int, required=True)
    gq.add_argument("--op", choices=["dot", "matmul"], default="dot")
    gq.add_argument("--len", type=int, default=8, help="vector length, or matrix dimension")
    gq.add_argument("--indexing", choices=["base_p", "binary_shift"], default="base_p")
    gq.add_argument("--cap", type=int, default=1 << 20, help="largest table size accepted")
    gq.add_argument("--seed", type=int, default=0)
    gq.add_argument("--csv", default=None)
    gq.set_defaults(func=cmd_gfq)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
