"""Simultaneous reduction modulo p of every q-adic digit of a word.

For ``r = sum mu~_i q^i`` with all ``mu~_i < q``, one division ``rop = r // p``
yields

    u_i = r // q^i - p * (rop // q^i)  =  (r // q^i) mod p,

all in ``[0, p)``.  The true residues follow from a bidiagonal correction,
``mu_d = u_d`` and ``mu_i = (u_i - q*u_{i+1}) mod p``, which vanishes when
``p | q`` and can be tabulated over windows of ``k_window`` digits.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .counters import CostReport
from .fpdiv import (
    WIDE_BITS,
    ReciprocalDivisor,
    floor_div,
    floor_div_premul_array,
)
from .params import NotPrimeError, is_prime

__all__ = [
    "DigitOverflow",
    "TableTooLarge",
    "CorrectionTable",
    "RedqPlan",
    "redq",
    "redq_digits",
    "redq_residues",
    "correct_direct",
    "correct_tabulated",
    "build_correction_table",
    "qd_matrix",
    "redq_digits_array",
    "redq_residues_array",
    "redq_array",
    "correct_direct_array",
    "correct_tabulated_array",
    "combine_digits",
    "save_table",
    "load_table",
    "cached_table",
    "clear_table_memo",
    "TABLE_CACHE_ENV",
]

TABLE_CACHE_ENV = "QPACK_TABLE_CACHE"
DEFAULT_TABLE_CAP = 1 << 22
INDEXINGS = ("base_p", "binary_shift")


class DigitOverflow(ValueError):
    """The input word is not digit-safe for the plan."""


class TableTooLarge(ValueError):
    pass


def _index_radix(p: int, indexing: str) -> int:
    if indexing == "base_p":
        return p
    if indexing == "binary_shift":
        return 1 << (p - 1).bit_length()
    raise ValueError(f"unknown indexing {indexing!r}")


@dataclass(frozen=True, eq=False)
class CorrectionTable:
    """Correction of a ``k_window``-digit window, indexed by the raw ``u`` digits.

    ``entries[index(u)]`` holds the corrected window packed in the index radix.
    Slots that no valid window maps to (binary-shift indexing only) hold -1.
    """

    p: int
    q: int
    k_window: int
    indexing: str
    entries: np.ndarray

    @property
    def radix(self) -> int:
        return _index_radix(self.p, self.indexing)

    @property
    def size(self) -> int:
        return len(self.entries)

    def index(self, window: Sequence[int]) -> int:
        if self.indexing == "binary_shift":
            b = self.radix.bit_length() - 1
            idx = 0
            for j, u in enumerate(window):
                idx |= u << (b * j)
            return idx
        idx = 0
        for u in reversed(window):
            idx = idx * self.p + u
        return idx

    def decode(self, entry: int) -> list[int]:
        if entry < 0:
            raise ValueError("unused table slot")
        out = []
        for _ in range(self.k_window):
            entry, mu = divmod(entry, self.radix)
            out.append(mu)
        return out

    def lookup(self, window: Sequence[int]) -> list[int]:
        return self.decode(int(self.entries[self.index(window)]))


def build_correction_table(p: int, q: int, k_window: int, indexing: str = "base_p",
                           max_entries: int = DEFAULT_TABLE_CAP) -> CorrectionTable:
    if k_window < 2:
        raise ValueError("k_window must be at least 2")
    radix = _index_radix(p, indexing)
    size = radix ** k_window
    if size > max_entries:
        raise TableTooLarge(f"table needs {size} entries, cap is {max_entries}")
    neg_q = (-q) % p
    idx = np.arange(size, dtype=np.int64)
    u = np.empty((size, k_window), dtype=np.int64)
    rest = idx.copy()
    for j in range(k_window):
        rest, u[:, j] = rest // radix, rest % radix
    mu = u.copy()
    mu[:, :-1] = (u[:, :-1] + neg_q * u[:, 1:]) % p
    entries = np.zeros(size, dtype=np.int64)
    for j in range(k_window - 1, -1, -1):
        entries = entries * radix + mu[:, j]
    if radix != p:
        entries[(u >= p).any(axis=1)] = -1
    entries.setflags(write=False)
    return CorrectionTable(p, q, k_window, indexing, entries)


@dataclass(frozen=True, eq=False)
class RedqPlan:
    """Precomputed data for reducing ``(d+1)``-digit words.

    ``path`` selects how floors are taken: ``"auto"`` multiplies by
    precomputed reciprocals in binary64 whenever the word is small enough for
    that to be exact, ``"int"`` always uses integer division (or shifts).
    """

    p: int
    q: int
    d: int
    correction: CorrectionTable | None = None
    path: str = "auto"
    inv_p: ReciprocalDivisor = field(init=False)
    q_powers: tuple = field(init=False)
    neg_q_mod_p: int = field(init=False)
    shift: int | None = field(init=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrimeError(f"p = {self.p} is not prime")
        if self.q < 2 or self.d < 0:
            raise ValueError("need q >= 2 and d >= 0")
        if self.path not in ("auto", "int"):
            raise ValueError(f"unknown path {self.path!r}")
        if self.correction is not None and (self.correction.p, self.correction.q) != (self.p, self.q):
            raise ValueError("correction table was built for different (p, q)")
        object.__setattr__(self, "inv_p", ReciprocalDivisor(self.p))
        object.__setattr__(self, "q_powers", tuple(self.q ** i for i in range(self.d + 2)))
        object.__setattr__(self, "neg_q_mod_p", (-self.q) % self.p)
        shift = self.q.bit_length() - 1 if self.q & (self.q - 1) == 0 else None
        object.__setattr__(self, "shift", shift)
        if shift is None:
            object.__setattr__(self, "_q_divisors",
                               tuple(ReciprocalDivisor(qi) for qi in self.q_powers[: self.d + 1]))

    @classmethod
    def with_table(cls, p: int, q: int, d: int, k_window: int,
                   indexing: str = "base_p", **kw) -> "RedqPlan":
        return cls(p, q, d, correction=cached_table(p, q, k_window, indexing), **kw)

    @property
    def word_limit(self) -> int:
        """Words must lie below ``q**(d+1)``."""
        return self.q_powers[self.d + 1]

    def _floor_q(self, x: int, i: int) -> int:
        if self.shift is not None:
            return x >> (self.shift * i)
        if self.path == "auto":
            return floor_div(x, self._q_divisors[i])
        return x // self.q_powers[i]

    def _floor_p(self, r: int) -> int:
        if self.path == "auto":
            return floor_div(r, self.inv_p)
        return r // self.p


def redq_digits(r: int, plan: RedqPlan, counter: CostReport | None = None,
                check: bool = False) -> list[int]:
    """Raw digits ``u_0..u_d``, each in ``[0, p)``, from a single division by p."""
    if check and not 0 <= r < plan.word_limit:
        raise DigitOverflow(f"word {r} has more than d+1 = {plan.d + 1} digits")
    if r.bit_length() > WIDE_BITS:
        raise OverflowError(f"word wider than {WIDE_BITS} bits")
    p = plan.p
    rop = plan._floor_p(r)
    if counter is not None:
        counter.divisions += 1
    u = [plan._floor_q(r, i) - p * plan._floor_q(rop, i) for i in range(plan.d + 1)]
    if check and not all(0 <= x < p for x in u):
        raise DigitOverflow(f"raw digits {u} escape [0, {p})")
    return u


def correct_direct(u: Sequence[int], plan: RedqPlan) -> list[int]:
    p, c = plan.p, plan.neg_q_mod_p
    mu = [(u[i] + c * u[i + 1]) % p for i in range(len(u) - 1)]
    mu.append(u[-1])
    return mu


def correct_tabulated(u: Sequence[int], table: CorrectionTable,
                      counter: CostReport | None = None) -> list[int]:
    """Chain overlapping windows: each non-final window keeps ``k_window - 1`` outputs."""
    d = len(u) - 1
    w = table.k_window
    if d == 0:
        return [u[0]]
    mu = []
    s = 0
    while True:
        window = list(u[s: s + w])
        window += [0] * (w - len(window))
        out = table.lookup(window)
        if counter is not None:
            counter.table_accesses += 1
        if s + w - 1 >= d:
            mu.extend(out[: d + 1 - s])
            return mu
        mu.extend(out[: w - 1])
        s += w - 1


def combine_digits(mu: Sequence[int], q: int) -> int:
    shift = q.bit_length() - 1 if q & (q - 1) == 0 else None
    value = 0
    if shift is not None:
        for i, x in enumerate(mu):
            value |= x << (shift * i)
        return value
    for x in reversed(mu):
        value = value * q + x
    return value


def redq_residues(r: int, plan: RedqPlan, counter: CostReport | None = None,
                  check: bool = False) -> list[int]:
    u = redq_digits(r, plan, counter, check)
    if plan.neg_q_mod_p == 0:
        mu = u
    elif plan.correction is not None:
        mu = correct_tabulated(u, plan.correction, counter)
    else:
        mu = correct_direct(u, plan)
    if counter is not None:
        counter.reduction_calls += 1
    if check:
        slow = []
        x = r
        for _ in range(plan.d + 1):
            x, c = divmod(x, plan.q)
            slow.append(c % plan.p)
        if slow != mu:
            raise DigitOverflow(f"reduction disagrees with digit-wise recomputation for {r}")
    return mu


def redq(r: int, plan: RedqPlan, counter: CostReport | None = None, check: bool = False) -> int:
    """Return ``sum (mu~_i mod p) q^i`` for a digit-safe word ``r``."""
    return combine_digits(redq_residues(r, plan, counter, check), plan.q)


def qd_matrix(d: int, q: int, p: int) -> np.ndarray:
    """Upper bidiagonal correction matrix over Z/pZ: 1 on the diagonal, -q above it."""
    m = np.eye(d + 1, dtype=np.int64)
    for i in range(d):
        m[i, i + 1] = (-q) % p
    return m


# -- array kernels ---------------------------------------------------------

def _as_words(r) -> np.ndarray:
    if not isinstance(r, np.ndarray):
        # plain ints: numpy would guess float64 for lists straddling 2**63
        try:
            r = np.array(r, dtype=np.int64)
        except OverflowError:
            r = np.array(r, dtype=object)
    if r.dtype == object or r.dtype == np.int64:
        return r
    if np.issubdtype(r.dtype, np.integer):
        if r.dtype == np.uint64 and r.size and int(r.max()) >= 1 << 63:
            return r.astype(object)
        return r.astype(np.int64)
    raise TypeError(f"unsupported word dtype {r.dtype}")


def _floor_array(r: np.ndarray, divisor: int, recip: ReciprocalDivisor | None, path: str):
    if (recip is not None and path == "auto" and r.dtype == np.int64 and r.size
            and int(r.max()) <= recip.r_max):
        return floor_div_premul_array(r, recip)
    return r // divisor


def redq_digits_array(r, plan: RedqPlan, counter: CostReport | None = None) -> np.ndarray:
    """Raw digits of every word in ``r``; returns an ``(n, d+1)`` int64 array."""
    r = _as_words(r)
    p = plan.p
    rop = _floor_array(r, p, plan.inv_p, plan.path)
    if counter is not None:
        counter.divisions += r.size
    u = np.empty((r.size, plan.d + 1), dtype=np.int64)
    for i in range(plan.d + 1):
        if plan.shift is not None:
            s = plan.shift * i
            ui = (r >> s) - p * (rop >> s)
        else:
            qi = plan.q_powers[i]
            rec = plan._q_divisors[i]
            ui = _floor_array(r, qi, rec, plan.path) - p * _floor_array(rop, qi, rec, plan.path)
        u[:, i] = ui.astype(np.int64) if ui.dtype == object else ui
    return u


def correct_direct_array(u: np.ndarray, plan: RedqPlan) -> np.ndarray:
    mu = u.copy()
    mu[:, :-1] = (u[:, :-1] + plan.neg_q_mod_p * u[:, 1:]) % plan.p
    return mu


def _window_indices(block: np.ndarray, table: CorrectionTable) -> np.ndarray:
    radix = table.radix
    idx = np.zeros(block.shape[0], dtype=np.int64)
    for j in range(block.shape[1] - 1, -1, -1):
        idx = idx * radix + block[:, j]
    return idx


def correct_tabulated_array(u: np.ndarray, table: CorrectionTable,
                            counter: CostReport | None = None) -> np.ndarray:
    n, width = u.shape
    d = width - 1
    w = table.k_window
    if d == 0:
        return u.copy()
    n_windows = math.ceil(d / (w - 1))
    padded = np.zeros((n, (w - 1) * n_windows + 1), dtype=np.int64)
    padded[:, :width] = u
    mu = np.empty_like(padded)
    powers = table.radix ** np.arange(w, dtype=np.int64)
    for t in range(n_windows):
        s = t * (w - 1)
        entry = table.entries[_window_indices(padded[:, s: s + w], table)]
        mu[:, s: s + w] = (entry[:, None] // powers) % table.radix
    if counter is not None:
        counter.table_accesses += n * n_windows
    return mu[:, :width]


def redq_residues_array(r, plan: RedqPlan, counter: CostReport | None = None) -> np.ndarray:
    u = redq_digits_array(r, plan, counter)
    if plan.neg_q_mod_p == 0:
        mu = u
    elif plan.correction is not None:
        mu = correct_tabulated_array(u, plan.correction, counter)
    else:
        mu = correct_direct_array(u, plan)
    if counter is not None:
        counter.reduction_calls += u.shape[0]
    return mu


def redq_array(r, plan: RedqPlan, counter: CostReport | None = None) -> np.ndarray:
    """Reduce every word of ``r``; the result keeps the word dtype of the input."""
    r = _as_words(r)
    mu = redq_residues_array(r, plan, counter)
    if r.dtype == object:
        mu = mu.astype(object)
    out = np.zeros(r.shape[0], dtype=r.dtype)
    for i in range(plan.d, -1, -1):
        if plan.shift is not None:
            out = (out << plan.shift) + mu[:, i]
        else:
            out = out * plan.q + mu[:, i]
    return out


# -- serialisation ---------------------------------------------------------

_MAGIC = b"QPCT"
_VERSION = 1
_HEADER = struct.Struct("<4sHBBQQIQ")


def save_table(table: CorrectionTable, path) -> None:
    """Write ``table`` in the versioned little-endian layout.

    Header: magic ``QPCT``, u16 version, u8 indexing tag (0 base_p,
    1 binary_shift), u8 entry width in bytes, u64 p, u64 q, u32 k_window,
    u64 entry count; then the entries as signed integers of that width.
    """
    width = 4 if int(table.entries.max()) < 1 << 31 else 8
    header = _HEADER.pack(_MAGIC, _VERSION, INDEXINGS.index(table.indexing), width,
                          table.p, table.q, table.k_window, table.size)
    body = table.entries.astype("<i4" if width == 4 else "<i8").tobytes()
    Path(path).write_bytes(header + body)


def load_table(path) -> CorrectionTable:
    raw = Path(path).read_bytes()
    magic, version, tag, width, p, q, k_window, count = _HEADER.unpack_from(raw)
    if magic != _MAGIC or version != _VERSION:
        raise ValueError(f"{path}: not a version-{_VERSION} correction table")
    dtype = "<i4" if width == 4 else "<i8"
    entries = np.frombuffer(raw, dtype=dtype, count=count, offset=_HEADER.size).astype(np.int64)
    entries.setflags(write=False)
    return CorrectionTable(p, q, k_window, INDEXINGS[tag], entries)


_memo: dict = {}


def clear_table_memo() -> None:
    _memo.clear()


def cached_table(p: int, q: int, k_window: int, indexing: str = "base_p",
                 cache_dir=None, max_entries: int = DEFAULT_TABLE_CAP) -> CorrectionTable:
    """Build a table, reusing a serialised copy from ``$QPACK_TABLE_CACHE`` when set."""
    cache_dir = cache_dir or os.environ.get(TABLE_CACHE_ENV)
    key = (p, q, k_window, indexing)
    if key in _memo:
        return _memo[key]
    if not cache_dir:
        table = _memo[key] = build_correction_table(p, q, k_window, indexing, max_entries)
        return table
    path = Path(cache_dir) / f"redq_p{p}_q{q}_w{k_window}_{indexing}.tbl"
    if path.exists():
        table = load_table(path)
        if (table.p, table.q, table.k_window, table.indexing) == key:
            _memo[key] = table
            return table
    table = _memo[key] = build_correction_table(p, q, k_window, indexing, max_entries)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_table(table, path)
    return table
