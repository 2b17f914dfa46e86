"""Topological binary test: distinct overlapping m-bit windows per block."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitseq import BitSequence
from .nist import window_values

# m -> (required block length, critical number of distinct windows)
SUPPORTED = {8: (2048, 150)}


@dataclass(frozen=True)
class TbtOutcome:
    m: int
    required_len: int
    unique_counts: tuple[int, ...]
    critical_value: int

    @property
    def mean_unique(self) -> float:
        return float(np.mean(self.unique_counts))

    @property
    def verdict(self) -> str:
        return "SR" if self.mean_unique > self.critical_value else "SNR"

    @property
    def applicable(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {
            "test_id": 18,
            "name": "Topological Binary Test",
            "m": self.m,
            "required_len": self.required_len,
            "critical_value": self.critical_value,
            "unique_counts": list(self.unique_counts),
            "mean_unique": self.mean_unique,
            "verdict": self.verdict,
        }


def unique_windows(block: np.ndarray, m: int) -> int:
    """Number of distinct overlapping m-bit windows in ``block``."""
    vals = window_values(block, m)
    return int(np.count_nonzero(np.bincount(vals, minlength=1 << m)))


def tbt_test(trial: BitSequence | np.ndarray, m: int = 8) -> TbtOutcome:
    """Average the distinct-window count over consecutive fixed-length blocks.

    The trial must be a whole number of blocks (2048 bits for m = 8).
    """
    if m not in SUPPORTED:
        raise ValueError(f"unsupported window length m={m}; supported: {sorted(SUPPORTED)}")
    required, critical = SUPPORTED[m]
    eps = trial.bits if isinstance(trial, BitSequence) else np.asarray(trial, dtype=np.uint8)
    n = eps.size
    if n == 0 or n % required:
        raise ValueError(f"length not multiple of {required}: n={n}")
    blocks = eps.reshape(n // required, required)
    counts = tuple(unique_windows(b, m) for b in blocks)
    return TbtOutcome(m, required, counts, critical)
