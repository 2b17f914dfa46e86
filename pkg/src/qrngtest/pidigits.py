"""Binary digits of pi.

Bulk digits come from mpmath's fixed-point pi and are cached on disk; the
hexadecimal digit-extraction formula gives an independent check of any
position without computing the digits before it.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
from mpmath.libmp import pi_fixed

# Fractional hex digits of pi, used to verify the first 64 bits.
PI_HEX_PREFIX = "243F6A8885A308D3"

_CHUNK = 1 << 20


def cache_dir() -> Path:
    root = os.environ.get("QRNGTEST_CACHE") or os.path.join(
        os.environ.get("XDG_CACHE_HOME", os.path.expanduser("~/.cache")), "qrngtest"
    )
    return Path(root)


def _series(j: int, n: int) -> float:
    """Fractional part of sum_k 16**(n-k) / (8k + j)."""
    s = 0.0
    for k in range(n + 1):
        r = 8 * k + j
        s = (s + pow(16, n - k, r) / r) % 1.0
    k = n + 1
    term = 1.0
    while True:
        term = 16.0 ** (n - k) / (8 * k + j)
        if term < 1e-17:
            break
        s += term
        k += 1
    return s % 1.0


def pi_hex_digit(position: int) -> int:
    """Hex digit of pi's fractional part at ``position`` (0-based), by digit extraction."""
    if position < 0:
        raise ValueError("position must be >= 0")
    x = (4 * _series(1, position) - 2 * _series(4, position) - _series(5, position) - _series(6, position)) % 1.0
    return int(16 * x)


def _compute(nbits: int) -> np.ndarray:
    guard = 64
    frac = pi_fixed(nbits + guard) - (3 << (nbits + guard))
    frac >>= guard
    nbytes = nbits // 8
    raw = np.frombuffer(frac.to_bytes(nbytes, "big"), dtype=np.uint8)
    bits = np.unpackbits(raw)
    head = "".join(map(str, bits[:64].tolist()))
    if head != format(int(PI_HEX_PREFIX, 16), "064b"):
        raise RuntimeError("pi digit computation failed verification")
    return bits


def pi_bits(count: int, offset: int = 0, use_cache: bool = True) -> np.ndarray:
    """Fractional binary digits of pi, ``[offset, offset + count)``."""
    end = offset + count
    nbits = max(_CHUNK, -(-end // _CHUNK) * _CHUNK)
    path = cache_dir() / f"pi_{nbits}.bin"
    bits = None
    if use_cache and path.exists():
        bits = np.unpackbits(np.fromfile(path, dtype=np.uint8))
        if bits.size != nbits:
            bits = None
    if bits is None:
        bits = _compute(nbits)
        if use_cache:
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                tmp = path.with_suffix(".tmp")
                np.packbits(bits).tofile(tmp)
                os.replace(tmp, path)
            except OSError:
                pass
    return bits[offset:end].copy()
