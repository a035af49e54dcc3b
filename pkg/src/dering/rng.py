"""Portable deterministic random numbers for synthetic data.

Measurement noise must be bit-reproducible from a seed regardless of host
or library version, so the generator is pinned to two published algorithms
rather than a library default:

* uniforms: SplitMix64 (Steele, Lea & Flood 2014); each draw advances the
  64-bit state by 0x9E3779B97F4A7C15 and mixes with the standard two
  xor-shift/multiply rounds. A double in [0, 1) is the top 53 bits of the
  output scaled by 2^-53.
* gaussians: the trigonometric Box-Muller transform. Each pair of uniforms
  (u1, u2) yields r = sqrt(-2 ln(1 - u1)) and the pair
  (r cos(2 pi u2), r sin(2 pi u2)); draws are consumed in that order with
  the second value cached.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 uniform generator with a Box-Muller gaussian stream."""

    def __init__(self, seed: int):
        self._state = seed & _MASK
        self._spare: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_gaussian(self) -> float:
        """Standard normal draw; generates Box-Muller pairs lazily."""
        if self._spare is not None:
            value, self._spare = self._spare, None
            return value
        u1 = self.next_double()
        u2 = self.next_double()
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        self._spare = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def gaussians(self, n: int) -> list[float]:
        return [self.next_gaussian() for _ in range(n)]
