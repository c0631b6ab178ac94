"""Seedable pseudorandom streams for reproducible augmentation.

The generator is SplitMix64, fixed so that runs are bit-reproducible across
machines and worker counts. Every work item derives its own independent
stream from (master seed, item index), so processing order never matters.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 output mix (finalizer) of a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class RngStream:
    """A SplitMix64 stream. Value-type: cheap to create, never shared."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & _MASK64

    @classmethod
    def for_item(cls, master_seed: int, index: int) -> "RngStream":
        """Derive the independent stream for work item `index`.

        The initial state is mix64(master_seed XOR (index+1)*golden), which
        decorrelates neighbouring indices and keeps index 0 distinct from
        the raw master seed.
        """
        if index < 0:
            raise ValueError(f"item index must be >= 0, got {index}")
        salt = ((index + 1) * _GOLDEN) & _MASK64
        return cls(mix64((master_seed ^ salt) & _MASK64))

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        """Uniform real in [0, 1), from the top 53 bits of the next output."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_in(self, lo: float, hi: float) -> float:
        """Uniform real in [lo, hi)."""
        return lo + self.uniform() * (hi - lo)
