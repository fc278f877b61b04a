"""Slow, independent reference implementations.

Nothing here touches packed words, reduction plans or field tables; inputs
and outputs are plain coefficient sequences.  Integers are exact Python ints,
refused beyond 256 bits.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .dqt import DensePoly

__all__ = [
    "SCRATCH_BITS",
    "schoolbook_mul",
    "schoolbook_mul_reference",
    "agrees_at_points",
    "naive_mod_digits",
    "naive_gfq_mul",
    "naive_gfq_dot",
    "naive_gfq_matmul",
    "poly_rem",
]

SCRATCH_BITS = 256


def _scratch(x: int) -> int:
    if abs(x).bit_length() > SCRATCH_BITS:
        raise OverflowError(f"scratch integer wider than {SCRATCH_BITS} bits")
    return x


def schoolbook_mul_reference(P: DensePoly, Q: DensePoly) -> DensePoly:
    """Textbook double loop, one reduction per term."""
    p = P.p
    if not P.coeffs or not Q.coeffs:
        return DensePoly((), p)
    out = [0] * (len(P) + len(Q) - 1)
    for i, a in enumerate(P.coeffs):
        for j, b in enumerate(Q.coeffs):
            out[i + j] = (out[i + j] + a * b) % p
    return DensePoly(tuple(out), p)


def schoolbook_mul(P: DensePoly, Q: DensePoly) -> DensePoly:
    """The same double loop with the inner loop run as one vector operation."""
    p = P.p
    if not P.coeffs or not Q.coeffs:
        return DensePoly((), p)
    b = np.array(Q.coeffs, dtype=np.int64)
    out = np.zeros(len(P) + len(Q) - 1, dtype=np.int64)
    for i, a in enumerate(P.coeffs):
        if a:
            seg = out[i: i + len(b)]
            seg += (a * b) % p
            seg %= p
    return DensePoly(tuple(int(c) for c in out), p)


def _eval_mod(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def agrees_at_points(P: DensePoly, Q: DensePoly, R: DensePoly) -> bool:
    """``R(x) == P(x) Q(x)`` at every point of Z/pZ."""
    p = P.p
    return all(_eval_mod(R.coeffs, x, p) == _eval_mod(P.coeffs, x, p) * _eval_mod(Q.coeffs, x, p) % p
               for x in range(p))


def naive_mod_digits(r: int, p: int, q: int, d: int) -> list[int]:
    """Base-``q`` digits ``0..d`` of ``r``, each reduced modulo ``p``."""
    _scratch(r)
    if not 0 <= r < q ** (d + 1):
        raise ValueError(f"r must lie in [0, q^{d + 1})")
    out = []
    for _ in range(d + 1):
        r, c = divmod(r, q)
        out.append(c % p)
    return out


def poly_rem(a: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo a monic polynomial over Z/pZ, padded to ``deg(modulus)``."""
    k = len(modulus) - 1
    rem = [c % p for c in a]
    while len(rem) > k:
        c = rem.pop()
        if c:
            for j in range(k):
                rem[len(rem) - k + j] = (rem[len(rem) - k + j] - c * modulus[j]) % p
    return rem + [0] * (k - len(rem))


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = _scratch(out[i + j] + x * y)
    return out


def naive_gfq_mul(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    return poly_rem(_poly_mul(a, b, p), modulus, p)


def naive_gfq_dot(v1, v2, modulus: Sequence[int], p: int) -> list[int]:
    """Sum of products of polynomial-represented elements, reduced modulo ``(p, modulus)``."""
    if len(v1) != len(v2):
        raise ValueError("length mismatch")
    k = len(modulus) - 1
    acc = [0] * k
    for a, b in zip(v1, v2):
        prod = naive_gfq_mul(a, b, modulus, p)
        acc = [(x + y) % p for x, y in zip(acc, prod)]
    return acc


def naive_gfq_matmul(A, B, modulus: Sequence[int], p: int) -> list[list[list[int]]]:
    n, inner, cols = len(A), len(B), len(B[0])
    return [[naive_gfq_dot([A[i][l] for l in range(inner)], [B[l][j] for l in range(inner)],
                           modulus, p)
             for j in range(cols)] for i in range(n)]
