"""Counter-based SplitMix64 generator, vectorised with numpy.

Output ``i`` (1-based) of the stream seeded with ``s`` is ``mix(s + i * GAMMA)``
modulo 2**64, so any slice of the stream can be produced independently. This
makes sharded sampling reproduce the unsharded sequence bit for bit.
"""

import numpy as np

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))


def _mix(z):
    z = (z ^ (z >> _S30)) * _C1
    z = (z ^ (z >> _S27)) * _C2
    return z ^ (z >> _S31)


def mix64(value):
    """Scalar finaliser, used to derive child seeds."""
    return int(_mix(np.array([value & MASK], dtype=np.uint64))[0])


def stream_seed(seed, index):
    """Seed of the ``index``-th independent substream of ``seed``."""
    return mix64((seed ^ mix64(index + 1)) + index * GAMMA)


class SplitMix64:
    """Vectorised SplitMix64 stream.

    >>> SplitMix64(0).next_uint64(1)[0] == 0xE220A8397B1DCDAF
    True
    """

    def __init__(self, seed):
        self.seed = int(seed) & MASK
        self._counter = 0

    def skip(self, count):
        self._counter += int(count)
        return self

    def next_uint64(self, size):
        size = int(size)
        idx = np.arange(self._counter + 1, self._counter + size + 1, dtype=np.uint64)
        base = np.array([self.seed], dtype=np.uint64)
        z = base + idx * np.uint64(GAMMA)
        self._counter += size
        return _mix(z)

    def uniform(self, size):
        """Doubles in [0, 1) with 53 random bits."""
        return (self.next_uint64(size) >> _S11).astype(np.float64) * 2.0**-53

    def normal(self, size):
        """Standard normals via Box-Muller, two per pair of uniforms."""
        size = int(size)
        half = (size + 1) // 2
        u1 = 1.0 - self.uniform(half)
        u2 = self.uniform(half)
        r = np.sqrt(-2.0 * np.log(u1))
        out = np.empty(2 * half)
        out[0::2] = r * np.cos(2.0 * np.pi * u2)
        out[1::2] = r * np.sin(2.0 * np.pi * u2)
        return out[:size]

    def complex_normal(self, shape):
        """Standard complex Gaussian entries (unit variance)."""
        shape = tuple(np.atleast_1d(shape))
        count = int(np.prod(shape))
        z = self.normal(2 * count)
        return ((z[0::2] + 1j * z[1::2]) / np.sqrt(2.0)).reshape(shape)
