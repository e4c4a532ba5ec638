"""Deterministic, cross-language-reproducible random streams.

Instance generation draws every random quantity from a SplitMix64 stream
keyed by (seed, purpose tag), so the draws for vertices, site centers,
radii, and weights are mutually independent and insensitive to call-order
refactoring.  Uniform reals use the standard 53-bit mantissa construction,
so any implementation of SplitMix64 reproduces instances bit for bit.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


class SplitMix64:
    """The SplitMix64 generator (Steele, Lea & Flood's splittable PRNG)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Uniform real in [lo, hi) from the top 53 bits of one draw."""
        u = (self.next_u64() >> 11) * (2.0**-53)
        return lo + (hi - lo) * u


def stream(seed: int, tag: str) -> SplitMix64:
    """Independent per-purpose generator keyed by (seed, tag)."""
    return SplitMix64(_mix64((seed ^ fnv1a64(tag.encode("utf-8"))) & _MASK64))
