"""Stateless Bernoulli(1/2) bit field indexed by time step and site.

Every consumer (TASEP, ABDF, the Burgers field) reads the same bits, which is
what makes the conjugacy identities exactly testable.  Bit derivation:

1. zig-zag encode the site: ``u = 2x`` for ``x >= 0`` else ``-2x - 1``;
2. ``m = seed ^ (t * GOLDEN) ^ rotl(u * MIX1, 31)`` in wrapping 64-bit
   arithmetic;
3. ``z = splitmix64_finalizer(m)``;
4. the bit is the most significant bit of ``z``.
"""

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class NoiseField:
    """The coordinates ``omega(t, x)`` of one sample of the noise, as a pure
    function of ``(seed, t, x)``."""

    seed: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) <= MASK64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))

    def bit(self, t, x):
        return noise_bit(self, t, x)

    def kappa(self, t, x):
        """Complementary bit ``1 - omega(t, x)``."""
        return 1 - noise_bit(self, t, x)


def _zigzag(x):
    return 2 * x if x >= 0 else -2 * x - 1


def _rotl(v, r):
    return ((v << r) | (v >> (64 - r))) & MASK64


def splitmix64_finalizer(z):
    z &= MASK64
    z ^= z >> 30
    z = (z * MIX1) & MASK64
    z ^= z >> 27
    z = (z * MIX2) & MASK64
    z ^= z >> 31
    return z


def noise_word(field, t, x):
    """Full 64-bit word whose top bit is ``omega(t, x)``."""
    if t < 0:
        raise ValueError("time step must be non-negative")
    m = field.seed ^ ((int(t) * GOLDEN) & MASK64) ^ _rotl((_zigzag(int(x)) * MIX1) & MASK64, 31)
    return splitmix64_finalizer(m)


def noise_bit(field, t, x):
    return noise_word(field, t, x) >> 63


# vectorized path -----------------------------------------------------------

_GOLDEN = np.uint64(GOLDEN)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)


def noise_words(seed, t, x):
    """Broadcasting version of :func:`noise_word` over arrays of seeds, times
    and sites.  Returns ``uint64``."""
    seed = np.asarray(seed, dtype=np.uint64)
    t = np.asarray(t, dtype=np.uint64)
    x = np.asarray(x, dtype=np.int64)
    with np.errstate(over="ignore"):  # wrapping 64-bit arithmetic is intended
        u = np.where(x >= 0, 2 * x, -2 * x - 1).astype(np.uint64)
        v = u * _MIX1
        v = (v << np.uint64(31)) | (v >> np.uint64(33))
        z = seed ^ (t * _GOLDEN) ^ v
        z = z ^ (z >> np.uint64(30))
        z = z * _MIX1
        z = z ^ (z >> np.uint64(27))
        z = z * _MIX2
        z = z ^ (z >> np.uint64(31))
    return z


def noise_bits(seed, t, x):
    """Broadcasting ``omega`` as ``int8``."""
    return (noise_words(seed, t, x) >> np.uint64(63)).astype(np.int8)


def noise_row(field, t, domain):
    """The section ``{omega(t, x)}`` over the sites of ``domain``."""
    if t < 0:
        raise ValueError("time step must be non-negative")
    return noise_bits(field.seed, t, domain.sites)
