"""Bit-level kernels over GF(2): matrix rank and Berlekamp-Massey.

Both work on Python integers used as bit vectors, which keeps the inner
loops to a handful of word operations per row or step.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


def rows_to_ints(matrix) -> list[int]:
    """Pack each row of a 0/1 matrix into an int, column 0 in the top bit."""
    m = np.asarray(matrix, dtype=np.uint8)
    if m.ndim != 2:
        raise ValueError("matrix must be 2-D")
    ncols = m.shape[1]
    weights = [1 << (ncols - 1 - j) for j in range(ncols)]
    return [sum(w for w, b in zip(weights, row) if b) for row in m.tolist()]


def gf2_rank(matrix) -> int:
    """Rank over GF(2) of a 0/1 matrix (array-like or list of int rows)."""
    if isinstance(matrix, np.ndarray) or (matrix and not isinstance(matrix[0], int)):
        rows = rows_to_ints(matrix)
    else:
        rows = list(matrix)
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        top = 1 << (pivot.bit_length() - 1)
        rows = [r ^ pivot if r & top else r for r in rows]
    return rank


def matrix_ranks(bits: np.ndarray, rows: int = 32, cols: int = 32) -> np.ndarray:
    """Ranks of consecutive ``rows x cols`` matrices filled row-wise from ``bits``."""
    size = rows * cols
    count = bits.size // size
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    body = np.asarray(bits[: count * size], dtype=np.uint8).reshape(count * rows, cols)
    # Pack rows into integers via big-endian bytes.
    packed = np.packbits(body, axis=1)
    nbytes = packed.shape[1]
    shift = nbytes * 8 - cols
    ints = [int.from_bytes(r, "big") >> shift for r in (bytes(x) for x in packed)]
    return np.array([gf2_rank(ints[k * rows : (k + 1) * rows]) for k in range(count)], dtype=np.int64)


def linear_complexity(bits: Sequence[int] | np.ndarray) -> int:
    """Length of the shortest LFSR generating ``bits`` (Berlekamp-Massey).

    Connection polynomials are ints with bit ``i`` holding coefficient
    ``c_i``; the recent-history window holds ``s[N - i]`` at bit ``i`` so the
    discrepancy is the parity of ``C & window``.
    """
    c, b = 1, 1
    length, m = 0, -1
    window = 0
    for n, s in enumerate(np.asarray(bits, dtype=np.uint8).tolist()):
        window = (window << 1) | s
        if (c & window).bit_count() & 1:
            t = c
            c ^= b << (n - m)
            if 2 * length <= n:
                length = n + 1 - length
                m = n
                b = t
    return length
