"""Deterministic random streams for reproducible Monte Carlo.

Every stochastic routine in the package draws from a :class:`RandomStream`
keyed by ``(master_seed, stream_index)``.  The convention is one stream per
logical task (one per trajectory, one per Monte Carlo estimator), with the
trajectory index doubling as the stream index, so ensemble results do not
depend on chunking or scheduling.  Streams wrap ``numpy``'s PCG64 bit
generator seeded through ``SeedSequence(master_seed, spawn_key=(index,))``,
which is stable across platforms and numpy versions >= 1.17.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["RandomStream", "draw_complex_gaussian"]

_U64 = 2**64


@dataclass
class RandomStream:
    """A deterministic stream of samples keyed by (master_seed, stream_index).

    A stream is stateful and must be owned by exactly one logical task;
    two streams built from the same key replay the identical sequence.
    """

    master_seed: int
    stream_index: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < _U64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if int(self.stream_index) < 0:
            raise ValueError(f"stream_index must be non-negative, got {self.stream_index}")
        self.master_seed = int(self.master_seed)
        self.stream_index = int(self.stream_index)
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def normals(self, shape) -> np.ndarray:
        """Standard normal block; the primitive every other draw reduces to."""
        return self._gen.standard_normal(shape)

    def complex_gaussian(self, variance: float, size=None):
        """Rotation-invariant complex Gaussian samples.

        Real and imaginary parts are independent N(0, variance/2), so
        E[z] = E[z^2] = 0 and E[z conj(z)] = variance.  Scalar when
        ``size`` is None, else an array of the requested shape.

        The layout is fixed: each sample consumes two consecutive
        standard normals (re, im), row-major over ``size``.  Splitting one
        large draw is therefore identical to several consecutive draws.
        """
        if variance < 0:
            raise ValueError(f"variance must be non-negative, got {variance}")
        shape = () if size is None else (tuple(size) if np.iterable(size) else (int(size),))
        block = self._gen.standard_normal(shape + (2,))
        z = (block[..., 0] + 1j * block[..., 1]) * np.sqrt(variance / 2.0)
        return complex(z) if size is None else z

    def integers(self, low: int, high: int, size=None) -> np.ndarray:
        return self._gen.integers(low, high, size=size)


def draw_complex_gaussian(stream: RandomStream, variance: float) -> complex:
    """One complex Gaussian sample with E[z conj(z)] = variance."""
    return stream.complex_gaussian(variance)
