"""32-bit Mersenne Twister (MT19937), reference recurrence."""

from __future__ import annotations

import numpy as np

N = 624
M = 397
MATRIX_A = 0x9908B0DF
UPPER_MASK = 0x80000000
LOWER_MASK = 0x7FFFFFFF


class MT19937:
    """MT19937 seeded like the reference ``init_genrand``/``init_by_array``.

    Integer seeds below 2**32 use ``init_genrand``; larger seeds are split
    into 32-bit words (least significant first) for ``init_by_array``.
    """

    def __init__(self, seed: int = 5489):
        self.mt = [0] * N
        self.mti = N + 1
        if not 0 <= seed < 1 << 64:
            raise ValueError("seed must be a non-negative 64-bit integer")
        if seed < 1 << 32:
            self.init_genrand(seed)
        else:
            self.init_by_array([seed & 0xFFFFFFFF, seed >> 32])

    def init_genrand(self, s: int) -> None:
        mt = self.mt
        mt[0] = s & 0xFFFFFFFF
        for i in range(1, N):
            mt[i] = (1812433253 * (mt[i - 1] ^ (mt[i - 1] >> 30)) + i) & 0xFFFFFFFF
        self.mti = N

    def init_by_array(self, key: list[int]) -> None:
        self.init_genrand(19650218)
        mt = self.mt
        i, j = 1, 0
        for _ in range(max(N, len(key))):
            mt[i] = ((mt[i] ^ ((mt[i - 1] ^ (mt[i - 1] >> 30)) * 1664525)) + key[j] + j) & 0xFFFFFFFF
            i += 1
            j += 1
            if i >= N:
                mt[0] = mt[N - 1]
                i = 1
            if j >= len(key):
                j = 0
        for _ in range(N - 1):
            mt[i] = ((mt[i] ^ ((mt[i - 1] ^ (mt[i - 1] >> 30)) * 1566083941)) - i) & 0xFFFFFFFF
            i += 1
            if i >= N:
                mt[0] = mt[N - 1]
                i = 1
        mt[0] = 0x80000000
        self.mti = N

    def _twist(self) -> None:
        mt = self.mt
        for kk in range(N):
            y = (mt[kk] & UPPER_MASK) | (mt[(kk + 1) % N] & LOWER_MASK)
            mt[kk] = mt[(kk + M) % N] ^ (y >> 1) ^ (MATRIX_A if y & 1 else 0)
        self.mti = 0

    def genrand_int32(self) -> int:
        if self.mti >= N:
            self._twist()
        y = self.mt[self.mti]
        self.mti += 1
        y ^= y >> 11
        y ^= (y << 7) & 0x9D2C5680
        y ^= (y << 15) & 0xEFC60000
        y ^= y >> 18
        return y

    def words(self, count: int) -> np.ndarray:
        return np.array([self.genrand_int32() for _ in range(count)], dtype=np.uint32)

    def bits(self, count: int) -> np.ndarray:
        """Next ``count`` bits, most significant bit of each output first.

        Bits of a partially used final word are discarded.
        """
        words = self.words(-(-count // 32))
        return np.unpackbits(words.astype(">u4").view(np.uint8))[:count]
