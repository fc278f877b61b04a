"""Packing polynomials over Z/pZ into q-adic words, and multiplying them.

A polynomial ``sum a_i X^i`` with ``deg < k`` is evaluated at ``X = q``.  The
product of two such words carries the full integer convolution of the
coefficient vectors in its base-``q`` digits, as long as every convolution
coefficient stays below ``q`` (guaranteed by :class:`~qpack.params.QadicParams`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .params import QadicParams

__all__ = [
    "PackingOverflow",
    "ParamsMismatch",
    "DensePoly",
    "Packed",
    "pack",
    "pack_digits",
    "pack_float",
    "unpack",
    "dqt_mul",
    "dqt_mul_poly",
]


class PackingOverflow(ValueError):
    pass


class ParamsMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DensePoly:
    """Coefficient vector over Z/pZ, lowest degree first."""

    coeffs: tuple
    p: int

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        for c in coeffs:
            if not 0 <= c < self.p:
                raise ValueError(f"coefficient {c} not reduced modulo {self.p}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def reduced(cls, coeffs: Sequence[int], p: int) -> "DensePoly":
        return cls(tuple(int(c) % p for c in coeffs), p)

    @property
    def degree(self) -> int:
        """Degree of the polynomial, -1 for zero."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __len__(self):
        return len(self.coeffs)

    def trimmed(self) -> "DensePoly":
        return DensePoly(self.coeffs[: self.degree + 1], self.p)


@dataclass(frozen=True)
class Packed:
    value: int
    params: QadicParams

    def as_float(self) -> float:
        if self.value >= 1 << 53:
            raise OverflowError("packed value is not exactly representable as a double")
        return float(self.value)

    @classmethod
    def from_float(cls, x: float, params: QadicParams) -> "Packed":
        if x != math.floor(x) or x < 0:
            raise ValueError(f"{x!r} is not a nonnegative integer value")
        return cls(int(x), params)


def pack_digits(digits: Sequence[int], params: QadicParams) -> Packed:
    """Evaluate raw digits (each ``< q``, not necessarily reduced mod p) at ``q``."""
    q = params.q
    if len(digits) > params.k and any(digits[params.k:]):
        raise PackingOverflow(f"more than k = {params.k} digits")
    digits = list(digits[: params.k])
    for c in digits:
        if not 0 <= c < q:
            raise PackingOverflow(f"digit {c} does not fit below q = {q}")
    b = params.shift
    value = 0
    if b is not None:
        for i, c in enumerate(digits):
            value |= c << (b * i)
    else:
        for c in reversed(digits):
            value = value * q + c
    return Packed(value, params)


def pack(poly: DensePoly, params: QadicParams) -> Packed:
    if poly.p != params.p:
        raise ParamsMismatch(f"polynomial over Z/{poly.p} packed with p = {params.p}")
    if poly.degree >= params.k:
        raise PackingOverflow(f"degree {poly.degree} >= k = {params.k}")
    return pack_digits(poly.coeffs, params)


def pack_float(poly: DensePoly, params: QadicParams) -> float:
    """The same evaluation carried out in binary64 arithmetic."""
    if poly.degree >= params.k:
        raise PackingOverflow(f"degree {poly.degree} >= k = {params.k}")
    coeffs = poly.coeffs[: params.k]
    b = params.shift
    x = 0.0
    if b is not None:
        for i, c in enumerate(coeffs):
            x += math.ldexp(float(c), b * i)
    else:
        q = float(params.q)
        for c in reversed(coeffs):
            x = x * q + c
    return x


def unpack(w, count: int, q: int | None = None) -> list[int]:
    """Base-``q`` digits of ``w`` (a :class:`Packed` or a plain int), lowest first."""
    if isinstance(w, Packed):
        value, q = w.value, w.params.q
    else:
        value = int(w)
        if q is None:
            raise ValueError("q is required when unpacking a plain integer")
    digits = []
    if q & (q - 1) == 0:
        b = q.bit_length() - 1
        mask = q - 1
        for _ in range(count):
            digits.append(value & mask)
            value >>= b
    else:
        for _ in range(count):
            value, c = divmod(value, q)
            digits.append(c)
    return digits


def dqt_mul(a: Packed, b: Packed) -> Packed:
    if a.params != b.params:
        raise ParamsMismatch("operands packed under different parameters")
    r = a.value * b.value
    if r >= 1 << a.params.m:
        raise OverflowError(f"product exceeds 2**{a.params.m}")
    return Packed(r, a.params)


def dqt_mul_poly(v1: DensePoly, v2: DensePoly, params: QadicParams,
                 view: str = "int") -> DensePoly:
    """Multiply two polynomials of degree < k with one word product.

    ``view="float"`` runs the evaluation and product in binary64.
    """
    if v1.p != params.p or v2.p != params.p:
        raise ParamsMismatch("polynomials and parameters disagree on p")
    n_out = max(len(v1) + len(v2) - 1, 0)
    if view == "int":
        r = dqt_mul(pack(v1, params), pack(v2, params)).value
    elif view == "float":
        if params.m > 53:
            raise ValueError("the float view needs m <= 53")
        r = int(pack_float(v1, params) * pack_float(v2, params))
    else:
        raise ValueError(f"unknown view {view!r}")
    digits = unpack(r, max(n_out, 2 * params.k - 1), params.q)
    p = params.p
    return DensePoly(tuple(c % p for c in digits[:n_out]), p)
