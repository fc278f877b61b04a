"""Polynomial multiplication over Z/pZ for arbitrary degree.

Two strategies are implemented side by side.

``fqt_mul`` cuts each operand into chunks of ``d+1`` coefficients, packs
every chunk into one q-adic word, and convolves the word sequences.  Up to
``n_q`` word products are summed before a vectorised REDQ brings every digit
back below ``p``; the reduced word is carried into the next group.

``delayed_mul`` is the classical baseline: centered residues, plain integer
products, and one remaindering per coefficient after at most ``n_d`` terms.

Both accept ``schedule="padded"``, which zero-pads the operands to the output
length and runs the full cyclic convolution so that the counters follow the
closed forms of the usual cost model exactly, or ``schedule="banded"``, which
skips the structurally zero terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .counters import CostReport
from .dqt import DensePoly, Packed
from .params import (
    BoundViolation,
    InfeasibleError,
    ParameterError,
    QadicParams,
    best_qadic,
    delayed_bound,
)
from .redq import RedqPlan, cached_table, redq_array

__all__ = [
    "CostReport",
    "FqtPoly",
    "fqt_params",
    "fqt_mul",
    "delayed_mul",
    "cost_model",
    "banded_cost",
    "SCHEDULES",
]

SCHEDULES = ("padded", "banded")
TABLE_BUDGET = 1 << 16

InnerMul = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _word_dtype(bits: int):
    return np.int64 if bits <= 63 else object


def fqt_params(p: int, m: int = 53, d: int | None = None, n_q: int | None = None) -> QadicParams:
    """Parameters for :func:`fqt_mul`.

    The chunk length comes from :func:`best_qadic` (asked for ``p - 1`` digits
    of headroom so a reduced accumulator can be carried between groups) unless
    ``d`` is given.  ``q`` is then the largest power of two the word allows,
    and ``n_q`` the largest accumulation that still leaves that headroom.
    """
    if d is None:
        k = best_qadic(p, m, 1, True, headroom=p - 1).k
    else:
        k = d + 1
    b = (m - 1) // (2 * k - 1)
    q = 1 << b
    step = k * (p - 1) ** 2
    room = (q - p) // step
    if room < 1:
        raise InfeasibleError(f"no power-of-two q fits k={k} for p={p} in {m} bits")
    if n_q is None:
        n_q = room
    elif n_q > room:
        raise BoundViolation(f"n_q={n_q} leaves no carry headroom with q={q} (max {room})")
    return QadicParams(p, q, k, n_q, m)


@dataclass(frozen=True, eq=False)
class FqtPoly:
    """A polynomial as q-adic words, chunk ``i`` holding the coefficients of
    ``X^(i(d+1)) .. X^(i(d+1)+d)``."""

    words: np.ndarray
    length: int
    params: QadicParams

    @property
    def d(self) -> int:
        return self.params.k - 1

    @property
    def chunks(self) -> list[Packed]:
        return [Packed(int(w), self.params) for w in self.words]

    @classmethod
    def from_poly(cls, poly: DensePoly, params: QadicParams) -> "FqtPoly":
        if poly.p != params.p:
            raise ParameterError("polynomial and parameters disagree on p")
        k, q = params.k, params.q
        n_chunks = max(math.ceil(len(poly) / k), 1)
        coeffs = np.zeros(n_chunks * k, dtype=_word_dtype(params.m))
        coeffs[: len(poly)] = poly.coeffs
        grid = coeffs.reshape(n_chunks, k)
        words = np.zeros(n_chunks, dtype=coeffs.dtype)
        for j in range(k - 1, -1, -1):
            words = words * q + grid[:, j]
        return cls(words, len(poly), params)

    def to_poly(self) -> DensePoly:
        k = self.params.k
        digits = _unpack_words(self.words, k, self.params.q)
        return DensePoly(tuple(int(c) for c in digits.reshape(-1)[: self.length]), self.params.p)


def _unpack_words(words: np.ndarray, count: int, q: int) -> np.ndarray:
    out = np.empty((len(words), count), dtype=np.int64)
    rest = words
    for j in range(count):
        rest, c = rest // q, rest % q
        out[:, j] = c.astype(np.int64) if c.dtype == object else c
    return out


def _grouped_convolution(a, b, group, reduce, counter, schedule, inner):
    """Convolve ``a`` and ``b`` summing at most ``group`` products per output between reductions."""
    out_len = len(a) + len(b) - 1
    acc = np.zeros(out_len, dtype=a.dtype)
    if schedule == "padded":
        a_pad = np.zeros(out_len, dtype=a.dtype)
        a_pad[: len(a)] = a
        b_pad = np.zeros(out_len, dtype=b.dtype)
        b_pad[: len(b)] = b
        for s in range(0, out_len, group):
            blk = a_pad[s: s + group]
            c = inner(blk, b_pad)
            folded = np.zeros(2 * out_len, dtype=a.dtype)
            folded[s: s + len(c)] = c
            acc = reduce(acc + folded[:out_len] + folded[out_len:], counter)
            if counter is not None:
                counter.mul_add += len(blk) * out_len
                counter.note_accumulation(len(blk))
    elif schedule == "banded":
        for s in range(0, len(a), group):
            blk = a[s: s + group]
            c = inner(blk, b)
            span = slice(s, s + len(c))
            acc[span] = reduce(acc[span] + c, counter)
            if counter is not None:
                counter.mul_add += len(blk) * len(b)
                counter.note_accumulation(len(blk))
    else:
        raise ValueError(f"unknown schedule {schedule!r}")
    return acc


def _auto_window(p: int, width: int) -> int | None:
    w = 0
    while w < width and p ** (w + 1) <= TABLE_BUDGET:
        w += 1
    return w if w >= 2 else None


def fqt_mul(P: DensePoly, Q: DensePoly, params: QadicParams, *, schedule: str = "padded",
            table_window: int | str | None = "auto", indexing: str = "base_p",
            counter: CostReport | None = None, inner: InnerMul = np.convolve) -> DensePoly:
    """``P * Q`` over Z/pZ through packed chunk products and tabulated REDQ.

    ``inner`` computes the full linear convolution of two word arrays and may
    be replaced by a faster exact algorithm; ``mul_add`` keeps counting the
    schoolbook slots.
    """
    p = params.p
    if P.p != p or Q.p != p:
        raise ParameterError("operands and parameters disagree on p")
    if len(P) == 0 or len(Q) == 0:
        return DensePoly((), p)
    d = params.k - 1
    a = FqtPoly.from_poly(P, params).words
    b = FqtPoly.from_poly(Q, params).words
    out_words = len(a) + len(b) - 1
    n_groups_max = math.ceil((out_words if schedule == "padded" else len(a)) / params.n_q)
    if n_groups_max > 1 and not params.q > params.digit_bound + p - 1:
        raise BoundViolation(
            f"q={params.q} leaves no room to carry a reduced word: need q > "
            f"{params.digit_bound} + {p - 1}")

    width = 2 * d + 1
    table = None
    if table_window == "auto":
        table_window = _auto_window(p, width)
    if table_window is not None and d > 0 and (-params.q) % p:
        table = cached_table(p, params.q, table_window, indexing)
    plan = RedqPlan(p, params.q, 2 * d, correction=table)

    acc = _grouped_convolution(a, b, params.n_q, lambda x, c: redq_array(x, plan, c),
                               counter, schedule, inner)

    digits = _unpack_words(acc, width, params.q)
    total = (out_words - 1) * (d + 1) + width
    coeffs = np.zeros(total, dtype=np.int64)
    for j in range(width):
        coeffs[j: j + (d + 1) * out_words: d + 1] += digits[:, j]
    coeffs -= p * (coeffs >= p)
    n_out = len(P) + len(Q) - 1
    return DensePoly(tuple(int(c) for c in coeffs[:n_out]), p)


def _centered(x: np.ndarray, p: int) -> np.ndarray:
    r = x % p
    return r - p * (r > (p - 1) // 2)


def delayed_mul(P: DensePoly, Q: DensePoly, m: int = 53, *, schedule: str = "padded",
                counter: CostReport | None = None, inner: InnerMul = np.convolve) -> DensePoly:
    """``P * Q`` over Z/pZ accumulating centered products, one remaindering per ``n_d`` terms."""
    p = P.p
    if Q.p != p:
        raise ParameterError("operands disagree on p")
    if len(P) == 0 or len(Q) == 0:
        return DensePoly((), p)
    n_d = delayed_bound(p, m)
    if n_d < 1:
        raise ParameterError(f"p = {p} cannot accumulate a single product in {m} bits")
    dtype = _word_dtype(m + 2)
    a = _centered(np.array(P.coeffs, dtype=dtype), p)
    b = _centered(np.array(Q.coeffs, dtype=dtype), p)

    def reduce(x, c):
        if c is not None:
            c.divisions += x.size
            c.reduction_calls += x.size
        return _centered(x, p)

    acc = _grouped_convolution(a, b, n_d, reduce, counter, schedule, inner)
    return DensePoly(tuple(int(c) for c in acc % p), p)


def cost_model(N: int, p: int, d: int, n_q: int, n_d: int) -> dict:
    """Closed-form operation counts for two degree-``N`` operands.

    Mul & add counts the word products of the padded convolution.  A
    reduction of ``k`` packed residues is priced at one division plus ``2k``
    multiply/adds, reported separately as ``redq_mul_add``.
    """
    D_q = math.ceil((N + 1) / (d + 1)) - 1
    lq = 2 * D_q + 1
    ld = 2 * N + 1
    fqt_red = lq * math.ceil(lq / n_q)
    delayed_red = ld * math.ceil(ld / n_d)
    return {
        "D_q": D_q,
        "fqt": {
            "mul_add": lq * lq,
            "reductions": fqt_red,
            "divisions": fqt_red,
            "redq_width": 2 * d + 1,
            "redq_mul_add": fqt_red * 2 * (2 * d + 1),
        },
        "delayed": {
            "mul_add": ld * ld,
            "reductions": delayed_red,
            "divisions": delayed_red,
        },
    }


def banded_cost(len_a: int, len_b: int, group: int) -> dict:
    """Counts produced by ``schedule="banded"`` for word sequences of the given lengths."""
    reductions = 0
    for s in range(0, len_a, group):
        reductions += min(group, len_a - s) + len_b - 1
    return {"mul_add": len_a * len_b, "reductions": reductions, "divisions": reductions}
