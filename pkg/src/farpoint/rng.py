"""SplitMix64: a tiny portable generator so batch tables replay anywhere.

State advances by ``0x9E3779B97F4A7C15``; output is the standard mix with
multipliers ``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``.  Uniform
doubles take the top 53 bits.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _M1) & _MASK
        z = ((z ^ (z >> 27)) * _M2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Double in ``[0, 1)``."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform_array(self, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return np.array([low + (high - low) * self.uniform() for _ in range(n)])

    def integers(self, low: int, high: int, n: int) -> list[int]:
        """``n`` integers in ``[low, high)``; modulo bias is negligible at these ranges."""
        span = high - low
        return [low + self.next_u64() % span for _ in range(n)]


def stream(seed: int, *keys: int) -> SplitMix64:
    """Independent generator for ``(seed, keys...)``, e.g. one per batch run."""
    g = SplitMix64(seed)
    for k in keys:
        g = SplitMix64(g.next_u64() ^ (int(k) & _MASK))
    return g
