"""Deterministic pseudo-random numbers for reproducible instances.

Everything random in this package (flags, sample points, the homotopy
constant) flows through SeededRng, a SplitMix64 stream.  The algorithm is
fixed here, in plain Python integer arithmetic, so that a given 64-bit seed
produces the same values on every platform and every release.
"""

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SeededRng:
    """SplitMix64 generator seeded with a 64-bit integer."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Uniform double in [lo, hi) with 53 bits of resolution."""
        return lo + (hi - lo) * ((self.next_u64() >> 11) * (1.0 / (1 << 53)))

    def complex_uniform(self, lo: float = 0.0, hi: float = 1.0) -> complex:
        """Complex number with real and imaginary parts uniform in [lo, hi)."""
        re = self.uniform(lo, hi)
        im = self.uniform(lo, hi)
        return complex(re, im)

    def unit_complex(self) -> complex:
        """Point on the unit circle, uniform in angle."""
        import cmath
        import math

        return cmath.exp(2j * math.pi * self.uniform())

    def spawn_seed(self) -> int:
        """Derive a child seed; used to give each flag its own stream."""
        return self.next_u64()
