"""Small extension fields GF(p^k) in discrete-logarithm representation.

Nonzero elements are stored as exponents ``e`` of a fixed generator ``g``; the
value ``p^k - 1`` is reserved for zero.  Dot products and matrix products
map every element to its q-adic evaluation at ``X = q`` (one table lookup),
run an exact binary64 dot product or matrix product, and convert back with one
division by ``p`` and two lookups in tables that absorb both the REDQ
correction and the reduction modulo the defining polynomial.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .counters import CostReport
from .fpdiv import floor_div_rn
from .params import NotPrimeError, ParameterError, QadicParams, is_prime

__all__ = [
    "FieldTooLarge",
    "GfqField",
    "build_field",
    "gfq_add",
    "gfq_mul",
    "gfq_neg",
    "gfq_inv",
    "fgdp_dot",
    "gfq_matmul",
    "parse_description",
]

DEFAULT_CAP = 1 << 20


class FieldTooLarge(ValueError):
    pass


# -- coefficient-list helpers (lowest degree first) --------------------------

def _to_index(coeffs: Sequence[int], p: int) -> int:
    idx = 0
    for c in reversed(coeffs):
        idx = idx * p + c
    return idx


def _from_index(idx: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        idx, c = divmod(idx, p)
        out.append(c)
    return out


def _polymod(a: list[int], modulus: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` by a monic ``modulus``; length ``deg(modulus)``."""
    a = list(a)
    k = len(modulus) - 1
    for top in range(len(a) - 1, k - 1, -1):
        c = a[top] % p
        if c:
            for j in range(k + 1):
                a[top - k + j] = (a[top - k + j] - c * modulus[j]) % p
    a = [x % p for x in a[:k]]
    return a + [0] * (k - len(a))


def _mulmod(a, b, modulus, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _polymod(prod, modulus, p)


def _irreducible(modulus: list[int], p: int) -> bool:
    k = len(modulus) - 1
    if k == 1:
        return True
    # no root, then no monic factor of degree 2..k//2
    if any(sum(c * pow(x, i, p) for i, c in enumerate(modulus)) % p == 0 for x in range(p)):
        return False
    for deg in range(2, k // 2 + 1):
        for low in range(p ** deg):
            divisor = _from_index(low, p, deg) + [1]
            if not any(_polymod(modulus, divisor, p)):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> list[int]:
    for low in range(p ** k):
        cand = _from_index(low, p, k) + [1]
        if _irreducible(cand, p):
            return cand
    raise RuntimeError(f"no irreducible polynomial of degree {k} over Z/{p}")


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _powmod(a, e, modulus, p):
    k = len(modulus) - 1
    result = [1] + [0] * (k - 1)
    while e:
        if e & 1:
            result = _mulmod(result, a, modulus, p)
        a = _mulmod(a, a, modulus, p)
        e >>= 1
    return result


def _has_full_order(g: list[int], modulus, p: int, order: int) -> bool:
    one = [1] + [0] * (len(modulus) - 2)
    return all(_powmod(g, (order - 1) // f, modulus, p) != one for f in _prime_factors(order - 1)) \
        if order > 2 else g == one


def _pick_params(p: int, k: int, q: int | None, m: int) -> QadicParams:
    step = k * (p - 1) ** 2
    if q is None:
        # largest power of two such that (2k-1) log2 q < m
        q = 1 << ((m - 1) // (2 * k - 1))
    n_q = (q - 1) // step
    if n_q < 1:
        raise ParameterError(f"q = {q} is too small for GF({p}^{k})")
    return QadicParams(p, q, k, n_q, m)


class GfqField:
    """GF(p^k) with conversion tables for packed dot products.

    Attributes of interest: ``modulus`` (monic coefficient list of the defining
    polynomial), ``generator`` (its coefficient list), ``log_table`` and
    ``antilog_table`` between polynomial indices ``sum c_i p^i`` and
    exponents, ``float_table`` (exponent to evaluation at ``q``), ``zech``
    (exponent ``n`` to the exponent of ``1 + g^n``) and ``L_table`` /
    ``H_table`` indexed by raw REDQ digit windows.
    """

    def __init__(self, p: int, k: int, q: int | None = None, *, indexing: str = "base_p",
                 m: int = 53, max_entries: int = DEFAULT_CAP,
                 modulus: Sequence[int] | None = None, generator: Sequence[int] | None = None):
        if not is_prime(p):
            raise NotPrimeError(f"p = {p} is not prime")
        if k < 1:
            raise ParameterError("k must be at least 1")
        self.p, self.k = p, k
        self.order = p ** k
        self.indexing = indexing
        if indexing == "base_p":
            self.radix = p
        elif indexing == "binary_shift":
            self.radix = 1 << (p - 1).bit_length()
        else:
            raise ValueError(f"unknown indexing {indexing!r}")
        largest = max(self.order, self.radix ** k)
        if largest > max_entries:
            raise FieldTooLarge(
                f"GF({p}^{k}) needs tables of {largest} entries ({self.memory_required()} "
                f"in total), cap is {max_entries}")
        self.params = _pick_params(p, k, q, m)
        self.q = self.params.q
        self.n_q = self.params.n_q
        self.zero = self.order - 1
        self.one = 0

        if modulus is None:
            modulus = _smallest_irreducible(p, k)
        else:
            modulus = [int(c) % p for c in modulus]
            if len(modulus) != k + 1 or modulus[-1] != 1 or not _irreducible(modulus, p):
                raise ParameterError(f"{modulus} is not a monic irreducible of degree {k}")
        self.modulus = modulus
        if generator is None:
            for idx in range(1, self.order):
                g = _from_index(idx, p, k)
                if _has_full_order(g, modulus, p, self.order):
                    break
        else:
            g = [int(c) % p for c in generator] + [0] * (k - len(generator))
            if not _has_full_order(g, modulus, p, self.order):
                raise ParameterError(f"{generator} does not generate GF({p}^{k})*")
        self.generator = g
        self._build_tables()

    def memory_required(self) -> int:
        return 4 * self.order + 2 * self.radix ** self.k

    def _build_tables(self):
        p, k, Q = self.p, self.k, self.order
        antilog = np.zeros(Q, dtype=np.int64)
        log = np.full(Q, -1, dtype=np.int64)
        cur = [1] + [0] * (k - 1)
        for e in range(Q - 1):
            idx = _to_index(cur, p)
            if log[idx] != -1:
                raise RuntimeError("generator order is smaller than p^k - 1")
            antilog[e] = idx
            log[idx] = e
            cur = _mulmod(cur, self.generator, self.modulus, p)
        antilog[self.zero] = 0
        log[0] = self.zero
        self.log_table, self.antilog_table = log, antilog

        q = self.q
        evals = np.zeros(Q, dtype=np.int64)
        for e in range(Q - 1):
            evals[e] = sum(c * q ** i for i, c in enumerate(_from_index(int(antilog[e]), p, k)))
        self.int_table = evals
        self.float_table = evals.astype(np.float64)

        zech = np.full(Q, self.zero, dtype=np.int64)
        for n in range(Q - 1):
            cs = _from_index(int(antilog[n]), p, k)
            cs[0] = (cs[0] + 1) % p
            zech[n] = log[_to_index(cs, p)]
        self.zech = zech

        neg_q = (-q) % p
        size = self.radix ** k
        L = np.full(size, -1, dtype=np.int64)
        H = np.full(size, -1, dtype=np.int64)
        for idx in range(size):
            v = _from_index(idx, self.radix, k)
            if any(x >= p for x in v):
                continue
            mu = [(v[i] + neg_q * v[i + 1]) % p for i in range(k - 1)] + [v[-1]]
            low = mu[: k - 1] + [0]
            L[idx] = log[_to_index(low, p)]
            high = _polymod([0] * (k - 1) + mu, self.modulus, p)
            H[idx] = log[_to_index(high, p)]
        self.L_table, self.H_table = L, H

    def __repr__(self):
        return f"GfqField(p={self.p}, k={self.k}, q={self.q}, modulus={self.modulus})"

    # element conversions
    def from_poly(self, coeffs: Sequence[int]) -> int:
        coeffs = _polymod([int(c) % self.p for c in coeffs], self.modulus, self.p)
        return int(self.log_table[_to_index(coeffs, self.p)])

    def to_poly(self, e: int) -> list[int]:
        return _from_index(int(self.antilog_table[e]), self.p, self.k)

    def elements(self) -> range:
        return range(self.order)

    def table_entries(self) -> dict:
        return {
            "log": len(self.log_table),
            "antilog": len(self.antilog_table),
            "float": len(self.float_table),
            "zech": len(self.zech),
            "L": len(self.L_table),
            "H": len(self.H_table),
        }

    def window_index(self, window: Sequence[int]) -> int:
        idx = 0
        for u in reversed(window):
            idx = idx * self.radix + u
        return idx

    def describe(self) -> str:
        """Plain-text field description for test fixtures."""
        lines = [
            f"p {self.p}",
            f"k {self.k}",
            "modulus " + " ".join(map(str, self.modulus)),
            "generator " + " ".join(map(str, self.generator)),
            f"q {self.q}",
            f"n_q {self.n_q}",
        ]
        return "\n".join(lines) + "\n"


def parse_description(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, *vals = line.split()
        nums = [int(v) for v in vals]
        out[key] = nums if key in ("modulus", "generator") else nums[0]
    return out


def build_field(p: int, k: int, q: int | None = None, **kw) -> GfqField:
    return GfqField(p, k, q, **kw)


# -- element arithmetic -------------------------------------------------------

def gfq_mul(a: int, b: int, field: GfqField) -> int:
    if a == field.zero or b == field.zero:
        return field.zero
    return (a + b) % (field.order - 1)


def gfq_add(a: int, b: int, field: GfqField, counter: CostReport | None = None) -> int:
    if a == field.zero:
        return b
    if b == field.zero:
        return a
    if counter is not None:
        counter.table_accesses += 1
    z = int(field.zech[(b - a) % (field.order - 1)])
    if z == field.zero:
        return field.zero
    return (a + z) % (field.order - 1)


def gfq_neg(a: int, field: GfqField) -> int:
    if a == field.zero or field.p == 2:
        return a
    # -1 = g^((p^k - 1) / 2) for odd p
    return (a + (field.order - 1) // 2) % (field.order - 1)


def gfq_inv(a: int, field: GfqField) -> int:
    if a == field.zero:
        raise ZeroDivisionError("zero has no inverse")
    return (-a) % (field.order - 1)


def _add_array(a: np.ndarray, b: np.ndarray, field: GfqField) -> np.ndarray:
    n = field.order - 1
    za, zb = a == field.zero, b == field.zero
    z = field.zech[(b - a) % n]
    s = np.where(z == field.zero, field.zero, (a + z) % n)
    return np.where(za, b, np.where(zb, a, s))


# -- packed kernels -------------------------------------------------------------

def _raw_digits(r: int, rop: int, field: GfqField) -> list[int]:
    p, q = field.p, field.q
    if q & (q - 1) == 0:
        b = q.bit_length() - 1
        return [(r >> (b * i)) - p * (rop >> (b * i)) for i in range(2 * field.k - 1)]
    return [r // q ** i - p * (rop // q ** i) for i in range(2 * field.k - 1)]


def _convert_back(r: int, field: GfqField, counter: CostReport | None) -> int:
    """Raw dot-product value to a field element: one division, two lookups, one addition."""
    k = field.k
    rop = floor_div_rn(r, field.p)
    u = _raw_digits(r, rop, field)
    low = int(field.L_table[field.window_index(u[:k])])
    high = int(field.H_table[field.window_index(u[k - 1:])])
    if counter is not None:
        counter.divisions += 1
        counter.reduction_calls += 1
        counter.table_accesses += 2
    return gfq_add(high, low, field, counter)


def fgdp_dot(v1: Sequence[int], v2: Sequence[int], field: GfqField,
             counter: CostReport | None = None) -> int:
    """Dot product over GF(p^k); vectors longer than ``n_q`` are split into groups."""
    if len(v1) != len(v2):
        raise ValueError(f"length mismatch: {len(v1)} != {len(v2)}")
    a = np.asarray(v1, dtype=np.int64)
    b = np.asarray(v2, dtype=np.int64)
    total = field.zero
    for s in range(0, len(a), field.n_q):
        x = field.float_table[a[s: s + field.n_q]]
        y = field.float_table[b[s: s + field.n_q]]
        r_float = float(np.dot(x, y))
        r = int(r_float)
        if counter is not None:
            counter.mul_add += len(x)
            counter.note_accumulation(len(x))
        total = gfq_add(total, _convert_back(r, field, counter), field, counter)
    return total


def gfq_matmul(A, B, field: GfqField, counter: CostReport | None = None) -> np.ndarray:
    """Matrix product over GF(p^k) by blocked binary64 matrix products."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"shapes {A.shape} and {B.shape} are not conformable")
    p, k, q = field.p, field.k, field.q
    rows, cols = A.shape[0], B.shape[1]
    C = np.full((rows, cols), field.zero, dtype=np.int64)
    shift = q.bit_length() - 1 if q & (q - 1) == 0 else None
    for s in range(0, A.shape[1], field.n_q):
        Af = field.float_table[A[:, s: s + field.n_q]]
        Bf = field.float_table[B[s: s + field.n_q, :]]
        R = Af @ Bf
        r = R.astype(np.int64)
        rop = np.floor(R / p).astype(np.int64)
        low = np.zeros_like(r)
        high = np.zeros_like(r)
        for i in range(2 * k - 1):
            if shift is not None:
                u = (r >> (shift * i)) - p * (rop >> (shift * i))
            else:
                u = r // q ** i - p * (rop // q ** i)
            if i < k:
                low += u * field.radix ** i
            if i >= k - 1:
                high += u * field.radix ** (i - k + 1)
        part = _add_array(field.H_table[high], field.L_table[low], field)
        C = _add_array(C, part, field)
        if counter is not None:
            n = rows * cols
            counter.mul_add += n * Af.shape[1]
            counter.divisions += n
            counter.reduction_calls += n
            counter.table_accesses += 3 * n
    return C
