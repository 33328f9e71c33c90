"""Portable seeded random number generator (splitmix64 + xoshiro256**).

Every randomized simulation in the toolkit must replay bit-for-bit from a
64-bit seed, on any platform, and regardless of whether the compiled
kernel extension is loaded. Neither ``random.Random`` nor NumPy's bit
generators can be mirrored cheaply inside a C loop with identical bounded
draws, so the generator is pinned to a small published algorithm instead:
xoshiro256** seeded through splitmix64, with Lemire's debiased method for
bounded integers. ``entrosim._speedups`` carries a C twin of exactly this
state machine; cross-lane equality is enforced by tests against vectors
frozen from the reference C implementation.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

# xoshiro256** jump polynomial: advances the state by 2^128 draws,
# yielding non-overlapping substreams from one seed.
_JUMP = (
    0x180EC6D33CFD0ABA,
    0xD5A61266F0C9392C,
    0xA9582618E03FC9AA,
    0x39ABDC4529B1661C,
)


def _splitmix64(x: int) -> tuple[int, int]:
    """One splitmix64 step: returns (advanced state, output)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x, z ^ (z >> 31)


class Xoshiro256:
    """xoshiro256** stream with bounded-int, float and shuffle helpers."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        x = seed & _MASK64
        x, self._s0 = _splitmix64(x)
        x, self._s1 = _splitmix64(x)
        x, self._s2 = _splitmix64(x)
        x, self._s3 = _splitmix64(x)
        if self._s0 == self._s1 == self._s2 == self._s3 == 0:
            # all-zero is the one forbidden xoshiro state
            self._s0 = 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        x = (s1 * 5) & _MASK64
        result = ((((x << 7) | (x >> 57)) & _MASK64) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def below(self, n: int) -> int:
        """Uniform integer in [0, n). Lemire debiased; n == 1 draws nothing."""
        if n <= 0:
            raise ValueError(f"below() requires n >= 1, got {n}")
        if n == 1:
            return 0
        m = self.next_u64() * n
        low = m & _MASK64
        if low < n:
            threshold = ((1 << 64) - n) % n
            while low < threshold:
                m = self.next_u64() * n
                low = m & _MASK64
        return m >> 64

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def getstate(self) -> tuple[int, int, int, int]:
        return (self._s0, self._s1, self._s2, self._s3)

    def setstate(self, state) -> None:
        s0, s1, s2, s3 = (int(w) & _MASK64 for w in state)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3

    def jumped(self) -> "Xoshiro256":
        """Copy of this generator advanced by 2^128 draws (a substream).

        The original generator is left untouched.
        """
        clone = Xoshiro256.__new__(Xoshiro256)
        clone.setstate(self.getstate())
        j0 = j1 = j2 = j3 = 0
        for word in _JUMP:
            for bit in range(64):
                if word & (1 << bit):
                    j0 ^= clone._s0
                    j1 ^= clone._s1
                    j2 ^= clone._s2
                    j3 ^= clone._s3
                clone.next_u64()
        clone._s0, clone._s1, clone._s2, clone._s3 = j0, j1, j2, j3
        return clone
