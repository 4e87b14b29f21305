"""Deterministic 64-bit generator for random-field instances.

This is splitmix64, specified bit-exactly so the same seed reproduces the
same field values in any language:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    z <- z XOR (z >> 31)

Each output z maps to a uniform draw in [-1, 1) via the top 53 bits:
u = (z >> 11) * 2^-53, value = 2u - 1.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform_signed(self) -> float:
        """Uniform in [-1, 1)."""
        u = (self.next_uint64() >> 11) * 2.0**-53
        return 2.0 * u - 1.0


def random_fields(count: int, seed: int) -> list[float]:
    gen = SplitMix64(seed)
    return [gen.uniform_signed() for _ in range(count)]
