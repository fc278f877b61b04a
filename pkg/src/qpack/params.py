"""Parameter bundles under which packed q-adic arithmetic stays exact.

A word packs ``k`` residues modulo ``p`` as the base-``q`` digits of one
integer.  Multiplying two such words and accumulating ``n_q`` products keeps
every digit below ``q`` provided

    q > n_q * k * (p - 1)**2      and      (2k - 1) * log2(q) < m

where ``m`` is the number of exact bits of the compute type (53 for a double,
64 for a machine word, 128 for a double word).  The second inequality is
evaluated exactly as ``q**(2k - 1) < 2**m``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

__all__ = [
    "ParameterError",
    "NotPrimeError",
    "BoundViolation",
    "InfeasibleError",
    "QadicParams",
    "DelayedParams",
    "is_prime",
    "validate",
    "best_qadic",
    "delayed_bound",
]


class ParameterError(ValueError):
    """Base class for rejected parameter bundles."""


class NotPrimeError(ParameterError):
    pass


class BoundViolation(ParameterError):
    """One of the two packing inequalities does not hold."""


class InfeasibleError(ParameterError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _bound_violation(p: int, q: int, k: int, n_q: int, m: int) -> str | None:
    lower = n_q * k * (p - 1) ** 2
    if not q > lower:
        return f"q > n_q*k*(p-1)^2 fails: {q} <= {n_q}*{k}*{(p - 1) ** 2} = {lower}"
    if not q ** (2 * k - 1) < 1 << m:
        return f"(2k-1)*log2(q) < m fails: q^{2 * k - 1} >= 2^{m}"
    return None


def validate(p: int, q: int, k: int, n_q: int, m: int) -> str | None:
    """Return ``None`` if the bundle is usable, else a description of the broken bound.

    A composite ``p`` is not a bound violation and raises :class:`NotPrimeError`.
    """
    for name, value in (("p", p), ("q", q), ("k", k), ("n_q", n_q), ("m", m)):
        if not isinstance(value, int) or value < 1:
            raise ParameterError(f"{name} must be a positive integer, got {value!r}")
    if not is_prime(p):
        raise NotPrimeError(f"p = {p} is not prime")
    return _bound_violation(p, q, k, n_q, m)


@dataclass(frozen=True)
class QadicParams:
    p: int
    q: int
    k: int
    n_q: int
    m: int

    def __post_init__(self):
        problem = validate(self.p, self.q, self.k, self.n_q, self.m)
        if problem is not None:
            raise BoundViolation(problem)

    @property
    def shift(self) -> int | None:
        """``b`` when ``q == 2**b``, else ``None``."""
        if self.q & (self.q - 1) == 0:
            return self.q.bit_length() - 1
        return None

    @property
    def digit_bound(self) -> int:
        """Largest digit an accumulation of ``n_q`` products can produce."""
        return self.n_q * self.k * (self.p - 1) ** 2


def _smallest_q(lower: int, power_of_two: bool) -> int:
    # smallest admissible q strictly above `lower`
    if not power_of_two:
        return lower + 1
    return 1 << lower.bit_length()


def best_qadic(
    p: int,
    m: int,
    n_q: int = 1,
    prefer_power_of_two: bool = True,
    headroom: int = 0,
) -> QadicParams:
    """Pick the densest packing for ``(p, m, n_q)``.

    ``k`` is maximised first; among bundles with that ``k`` the smallest ``q``
    wins.  ``headroom`` asks for ``q`` to exceed the digit bound by that much
    more, which callers carrying a reduced accumulator between groups need.
    """
    if not is_prime(p):
        raise NotPrimeError(f"p = {p} is not prime")
    if m < 1 or n_q < 1 or headroom < 0:
        raise ParameterError("m and n_q must be positive, headroom nonnegative")
    best = None
    # q >= 2 so q**(2k-1) < 2**m forces 2k - 1 < m
    for k in range(1, (m + 1) // 2 + 1):
        q = _smallest_q(n_q * k * (p - 1) ** 2 + headroom, prefer_power_of_two)
        if q ** (2 * k - 1) < 1 << m:
            best = (k, q)
    if best is None:
        raise InfeasibleError(f"no packing length k >= 1 is feasible for p={p}, m={m}, n_q={n_q}")
    k, q = best
    return QadicParams(p, q, k, n_q, m)


@dataclass(frozen=True)
class DelayedParams:
    """Centered-residue accumulation budget: ``n_d * (p-1)**2 < 2**(m+1)``."""

    p: int
    m: int
    n_d: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrimeError(f"p = {self.p} is not prime")
        if self.n_d < 1 or not self.n_d * (self.p - 1) ** 2 < 1 << (self.m + 1):
            raise BoundViolation(f"n_d*(p-1)^2 < 2^(m+1) fails for n_d={self.n_d}")

    @classmethod
    def for_prime(cls, p: int, m: int) -> "DelayedParams":
        return cls(p, m, delayed_bound(p, m))


def delayed_bound(p: int, m: int) -> int:
    """Largest ``n`` with ``n * (p-1)**2 < 2**(m+1)``; 0 (with a warning) if none."""
    if p < 2:
        raise ParameterError("p must be at least 2")
    n_d = ((1 << (m + 1)) - 1) // (p - 1) ** 2
    if n_d < 1:
        warnings.warn(f"p = {p} is too large for m = {m}: no product can be accumulated",
                      stacklevel=2)
    return n_d
