"""Borel normality and Bayesian subsequence-frequency criteria.

Both tests count the ``2**i`` possible strings among the ``n // i``
non-overlapping ``i``-bit blocks, for ``i = 1 .. i_max`` with
``i_max = max(1, floor(log2(log2 n)))``.

The Bayesian criterion scores each ``i`` by the log Bayes factor of a
symmetric Dirichlet(1)-multinomial model against the exactly uniform
multinomial; a positive value means the counts favour a biased source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitseq import BitSequence
from .special import lgamma

MIN_LENGTH = 32


@dataclass(frozen=True)
class LevelResult:
    i: int
    lhs_values: tuple[float, ...]
    rhs: float
    violations: int


@dataclass(frozen=True)
class LhsRhsOutcome:
    test_id: int
    per_i: tuple[LevelResult, ...]
    i_max: int
    n: int = 0
    statistics: dict = field(default_factory=dict, compare=False)

    @property
    def violations(self) -> int:
        """Total number of bound violations over all levels."""
        return sum(level.violations for level in self.per_i)

    @property
    def verdict(self) -> str:
        return "SNR" if self.violations else "SR"

    @property
    def applicable(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id,
            "name": "Borel Normality Criterion" if self.test_id == 16 else "Bayesian Criteria",
            "n": self.n,
            "i_max": self.i_max,
            "verdict": self.verdict,
            "violations": self.violations,
            "per_i": [
                {
                    "i": lv.i,
                    "rhs": lv.rhs,
                    "violations": lv.violations,
                    "lhs_values": list(lv.lhs_values),
                    **({"strings": [format(s, f"0{lv.i}b") for s in range(1 << lv.i)]} if self.test_id == 16 else {}),
                }
                for lv in self.per_i
            ],
        }


def default_i_max(n: int) -> int:
    if n < 2:
        return 1
    return max(1, int(math.floor(math.log2(math.log2(n)))))


def block_counts(eps: np.ndarray, i: int) -> np.ndarray:
    """Counts of each i-bit string among the non-overlapping i-blocks."""
    N = eps.size // i
    blocks = eps[: N * i].reshape(N, i).astype(np.int64)
    vals = blocks @ (1 << np.arange(i - 1, -1, -1))
    return np.bincount(vals, minlength=1 << i)


def _prepare(seq, i_max):
    eps = seq.bits if isinstance(seq, BitSequence) else np.asarray(seq, dtype=np.uint8)
    n = int(eps.size)
    if n < MIN_LENGTH:
        raise ValueError(f"sequence too short: n={n} < {MIN_LENGTH}")
    if i_max is None:
        i_max = default_i_max(n)
    if i_max < 1:
        raise ValueError(f"i_max must be >= 1, got {i_max}")
    return eps, n, i_max


def borel_test(seq: BitSequence | np.ndarray, i_max: int | None = None) -> LhsRhsOutcome:
    """Borel normality: every i-string frequency within sqrt(log2(n)/n) of 2**-i."""
    eps, n, i_max = _prepare(seq, i_max)
    rhs = math.sqrt(math.log2(n) / n)
    levels = []
    for i in range(1, i_max + 1):
        counts = block_counts(eps, i)
        lhs = counts / (n // i) - 2.0 ** -i
        levels.append(LevelResult(i, tuple(lhs.tolist()), rhs, int(np.count_nonzero(np.abs(lhs) > rhs))))
    return LhsRhsOutcome(16, tuple(levels), i_max, n)


def log_bayes_factor(counts) -> float:
    """log p(counts | Dirichlet(1) mixture) - log p(counts | uniform), per observed sequence."""
    c = np.asarray(counts, dtype=np.float64)
    K = c.size
    N = c.sum()
    return float(lgamma(K) - lgamma(N + K) + np.sum(lgamma(c + 1)) + N * math.log(K))


def bayesian_test(seq: BitSequence | np.ndarray, i_max: int | None = None) -> LhsRhsOutcome:
    """Bayesian criterion: SR at level i iff the log Bayes factor for bias is below 0."""
    eps, n, i_max = _prepare(seq, i_max)
    levels = []
    for i in range(1, i_max + 1):
        lhs = log_bayes_factor(block_counts(eps, i))
        rhs = 0.0
        levels.append(LevelResult(i, (lhs,), rhs, int(lhs >= rhs)))
    return LhsRhsOutcome(17, tuple(levels), i_max, n)
