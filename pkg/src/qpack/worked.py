"""Hand-checkable worked examples with every intermediate value pinned."""

from __future__ import annotations

import numpy as np

from .counters import CostReport
from .dqt import DensePoly, dqt_mul, dqt_mul_poly, pack, pack_digits, unpack
from .params import QadicParams
from .polymul import fqt_mul
from .redq import (
    CorrectionTable,
    RedqPlan,
    build_correction_table,
    correct_direct,
    correct_tabulated,
    redq,
    redq_digits,
)

__all__ = ["run_worked_examples", "failures", "window_starts"]


def window_starts(d: int, k_window: int) -> list[int]:
    """First digit index of every window visited by the tabulated correction."""
    if d == 0:
        return []
    starts, s = [], 0
    while True:
        starts.append(s)
        if s + k_window - 1 >= d:
            return starts
        s += k_window - 1


def _corrupted(table: CorrectionTable) -> CorrectionTable:
    entries = (table.entries + 1) % table.radix ** table.k_window
    return CorrectionTable(table.p, table.q, table.k_window, table.indexing, entries)


def run_worked_examples(corrupt: bool = False) -> list[tuple[str, object, object]]:
    """Return ``(label, expected, got)`` for every checked value."""
    checks = []

    def check(label, expected, got):
        checks.append((label, expected, got))

    # (X+1)(X+2) over Z/3 with q = 100
    params = QadicParams(3, 100, 2, 1, 53)
    a = pack(DensePoly((1, 1), 3), params)
    b = pack(DensePoly((2, 1), 3), params)
    check("ex1 pack(X+1)", 101, a.value)
    check("ex1 pack(X+2)", 102, b.value)
    check("ex1 product", 10302, dqt_mul(a, b).value)
    check("ex1 digits", [2, 3, 1], unpack(10302, 3, 100))
    check("ex1 result", (2, 0, 1), dqt_mul_poly(DensePoly((1, 1), 3), DensePoly((2, 1), 3), params).coeffs)

    # p = 5 divides q = 10^4: no correction needed
    params = QadicParams(5, 10 ** 4, 3, 1, 128)
    wa = pack_digits([3, 2, 1], params)
    wb = pack_digits([6, 5, 4], params)
    r = dqt_mul(wa, wb).value
    check("ex2 product", 40013002800270018, r)
    check("ex2 rop", 8002600560054003, r // 5)
    plan = RedqPlan(5, 10 ** 4, 4)
    check("ex2 reduced word", 40003000300020003, redq(r, plan))
    got = fqt_mul(DensePoly((3, 2, 1), 5), DensePoly.reduced((6, 5, 4), 5), params)
    check("ex2 result", (3, 2, 3, 3, 4), got.coeffs)

    # p = 23, q = 10^6: full correction
    r = 1234005678009123004567
    table = build_correction_table(23, 10 ** 6, 2)
    if corrupt:
        table = _corrupted(table)
    plan = RedqPlan(23, 10 ** 6, 3)
    counter = CostReport()
    u = redq_digits(r, plan, counter)
    check("ex3 rop", 53652420783005348024, r // 23)
    check("ex3 rop*23", 1234005678009123004552, (r // 23) * 23)
    check("ex3 u", [15, 8, 18, 15], u)
    check("ex3 divisions", 1, counter.divisions)
    check("ex3 -q mod p", 17, plan.neg_q_mod_p)
    check("ex3 mu direct", [13, 15, 20, 15], correct_direct(u, plan))
    check("ex3 mu tabulated", [13, 15, 20, 15], correct_tabulated(u, table))

    # Q_6 through three overlapping Q_2 windows
    table = build_correction_table(7, 32, 3)
    if corrupt:
        table = _corrupted(table)
    plan = RedqPlan(7, 32, 6)
    u = [0, 1, 2, 3, 4, 5, 6]
    counter = CostReport()
    mu = correct_tabulated(u, table, counter)
    check("ex4 windows", [0, 2, 4], window_starts(6, 3))
    check("ex4 accesses", 3, counter.table_accesses)
    check("ex4 mu", correct_direct(u, plan), mu)
    return checks


def failures(checks) -> list[tuple[str, object, object]]:
    return [c for c in checks if _norm(c[1]) != _norm(c[2])]


def _norm(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, tuple):
        return list(x)
    return x
