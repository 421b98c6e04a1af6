"""SplitMix64, the seeded generator behind every sampled point cloud.

The generator is tiny and fully specified so that any implementation can
reproduce the output bit for bit::

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z <- (z xor (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output z xor (z >> 31)

Uniform doubles are ``(output >> 11) * 2^-53`` in ``[0, 1)``.  Normals use one
Box-Muller draw per pair of uniforms, ``sqrt(-2 ln(1 - u1)) cos(2 pi u2)``.
Sample ``i`` of a sweep with seed ``s`` draws from its own generator seeded
with the ``i``-th output of ``SplitMix64(s)`` (computed directly from the
counter, not by iterating), so samples are independent of evaluation order.
"""

from __future__ import annotations

import math

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK

    @classmethod
    def for_sample(cls, seed: int, index: int) -> "SplitMix64":
        """Generator for sample ``index``: seeded with output ``index`` of ``SplitMix64(seed)``."""
        return cls(mix64((int(seed) + (index + 1) * GAMMA) & MASK))

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK
        return mix64(self.state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * u

    def randint(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]`` by reduction modulo the range (bias below 2^-50 here)."""
        return lo + self.next_u64() % (hi - lo + 1)

    def normal(self) -> float:
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)

    def choice(self, items):
        return items[self.randint(0, len(items) - 1)]
