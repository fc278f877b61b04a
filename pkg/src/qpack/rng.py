"""SplitMix64, the seeded generator behind every CLI input.

State update ``s += 0x9E3779B97F4A7C15`` (mod 2**64), output mixed by

    z = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z ^= z >> 31

Values below ``n`` are drawn as ``next() % n``; the modulo bias is accepted
because ``n`` is tiny next to 2**64 and being easy to reproduce elsewhere matters more.
"""

from __future__ import annotations

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next() % n

    def vector(self, n: int, length: int) -> list[int]:
        return [self.next() % n for _ in range(length)]
