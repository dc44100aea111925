"""Deterministic 64-bit random streams (splitmix64).

Pure integer arithmetic, so identical seeds produce identical streams on
every platform and Python build.
"""

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *indices: int) -> int:
    """Derive a child seed for a substream (utterance, scheme, ...).

    Chaining splitmix64 finalizers keeps substreams decorrelated while
    staying reproducible from (seed, indices) alone.
    """
    z = seed & _MASK64
    for ix in indices:
        z = _mix((z + (_GAMMA * ((ix & _MASK64) + 1))) & _MASK64)
    return z


class SplitMix64:
    """splitmix64 generator yielding u64s, unit floats, and bounded ints."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix(self._state)

    def uniform(self) -> float:
        # top 53 bits -> [0, 1) with full double precision
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n); rejection sampling avoids modulo bias."""
        if n <= 0:
            raise ValueError("randint needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def choice(self, seq):
        return seq[self.randint(len(seq))]
