"""
Seeded initial placement.

A splitmix64 stream gives uniform doubles in [0, 1); node i takes two of them,
u1 then u2, in ascending node order and lands at radius sqrt(u1), angle
2*pi*u2 on the unit disk. Any implementation of the same stream reproduces
the same start.
"""

import math

import numpy as np

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * (2.0 ** -53)


def random_disk(n: int, seed: int) -> np.ndarray:
    """(n, 2) points uniform on the unit disk."""
    rng = SplitMix64(seed)
    points = np.zeros((n, 2))
    for i in range(n):
        r = math.sqrt(rng.next_float())
        theta = 2.0 * math.pi * rng.next_float()
        points[i] = (r * math.cos(theta), r * math.sin(theta))
    return points
