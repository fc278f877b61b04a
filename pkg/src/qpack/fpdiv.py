"""Exact floor division through binary64 floating-point operations.

Two routes are provided.  :func:`floor_div_rn` divides in round-to-nearest
and floors the quotient, which is exact whenever both operands are exactly
representable.  :func:`floor_div_premul` multiplies by a reciprocal of ``p``
rounded toward +inf, rounds the product upward as well, and floors; the
result is exact for ``r < 1/(2e + e**2)`` where ``e`` bounds the relative
upward error of each of the two roundings.

Python cannot switch the FPU rounding mode.  The reciprocal is rounded upward
exactly (checked with rationals, once per divisor); the per-call product is
computed in round-to-nearest and then bumped by one ulp, which overshoots the
exact value by less than ``3u`` relatively (``u = 2**-53``).  The divisor
therefore uses ``e = 4u = 2**-51`` and ``r_max = 2**50 - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "UNIT_ROUNDOFF",
    "EMULATED_EPSILON",
    "WIDE_BITS",
    "PreconditionError",
    "ReciprocalDivisor",
    "lemma1_bound",
    "floor_div_rn",
    "floor_div_premul",
    "floor_div_premul_array",
    "floor_div",
    "premul_counterexamples",
]

UNIT_ROUNDOFF = 2.0 ** -53
EMULATED_EPSILON = 4 * UNIT_ROUNDOFF
# ceiling of the integer fallback path
WIDE_BITS = 256

_EXACT_LIMIT = 1 << 53


class PreconditionError(ValueError):
    pass


def lemma1_bound(epsilon) -> int:
    """Largest integer ``r`` with ``r < 1/(2*epsilon + epsilon**2)``, computed exactly."""
    e = Fraction(epsilon)
    if not 0 < e < 1:
        raise PreconditionError("epsilon must lie in (0, 1)")
    x = 1 / (2 * e + e * e)
    if x.denominator == 1:
        return x.numerator - 1
    return math.floor(x)


def _reciprocal_up(p: int) -> float:
    inv = 1.0 / p
    if Fraction(inv) < Fraction(1, p):
        inv = math.nextafter(inv, math.inf)
    return inv


@dataclass(frozen=True)
class ReciprocalDivisor:
    p: int
    inv_up: float = field(init=False)
    epsilon: float = field(init=False, default=EMULATED_EPSILON)
    r_max: int = field(init=False)

    def __post_init__(self):
        if self.p < 1:
            raise PreconditionError("divisor must be positive")
        object.__setattr__(self, "inv_up", _reciprocal_up(self.p))
        object.__setattr__(self, "r_max", lemma1_bound(self.epsilon))

    def floor_div(self, r: int) -> int:
        return floor_div(r, self)


def floor_div_rn(r: int, p: int) -> int:
    """``r // p`` via one round-to-nearest division; operands must be exact doubles."""
    if r < 0 or p < 1:
        raise PreconditionError("need r >= 0 and p >= 1")
    if r > _EXACT_LIMIT or p > _EXACT_LIMIT:
        raise PreconditionError(f"operands must be at most 2**53, got r={r}, p={p}")
    return math.floor(float(r) / float(p))


def floor_div_premul(r: int, d: ReciprocalDivisor) -> int:
    if r < 0:
        raise PreconditionError("r must be nonnegative")
    if r > d.r_max:
        raise PreconditionError(f"r = {r} exceeds r_max = {d.r_max}")
    t = math.nextafter(float(r) * d.inv_up, math.inf)
    return math.floor(t)


def floor_div_premul_array(r: np.ndarray, d: ReciprocalDivisor) -> np.ndarray:
    """Vectorised :func:`floor_div_premul`; ``r`` must be nonnegative and ``<= d.r_max``."""
    r = np.asarray(r)
    if r.size and (int(r.min()) < 0 or int(r.max()) > d.r_max):
        raise PreconditionError(f"array entries must lie in [0, {d.r_max}]")
    t = np.nextafter(r.astype(np.float64) * d.inv_up, np.inf)
    return np.floor(t).astype(np.int64)


def floor_div(r: int, d: ReciprocalDivisor) -> int:
    """Floating-point route while the rounding bound allows it, wide integers otherwise."""
    if 0 <= r <= d.r_max:
        return floor_div_premul(r, d)
    if r < 0 or r.bit_length() > WIDE_BITS:
        raise OverflowError(f"numerator outside [0, 2**{WIDE_BITS})")
    return r // d.p


def premul_counterexamples(d: ReciprocalDivisor, start: int, count: int) -> list[int]:
    """Scan worst-case numerators ``u*p + p - 1`` from ``start`` for premul failures.

    Only numerators representable exactly as doubles are tried.  The bound is
    not enforced here: the point is to probe beyond ``r_max``.
    """
    p = d.p
    u0 = max(start // p, 0)
    u = np.arange(u0, u0 + count, dtype=np.int64)
    r = u * p + (p - 1)
    r = r[r <= _EXACT_LIMIT]
    t = np.nextafter(r.astype(np.float64) * d.inv_up, np.inf)
    got = np.floor(t).astype(np.int64)
    return [int(x) for x in r[got != r // p]]
