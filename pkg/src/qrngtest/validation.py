"""Input validation helpers shared by the estimator wrappers and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .bitseq import BitSequence, TrialSet


def check_bits(X, *, min_bits: int = 1) -> np.ndarray:
    """Validate a 2-D array of trials (one row per trial) holding only 0 and 1.

    Accepts array-likes, a :class:`TrialSet`, or a sequence of
    :class:`BitSequence` of equal length.  Returns a uint8 array.
    """
    if isinstance(X, TrialSet):
        X = X.as_array()
    elif isinstance(X, (list, tuple)) and X and isinstance(X[0], BitSequence):
        if len({len(t) for t in X}) != 1:
            raise ValueError("trials have mixed lengths")
        X = np.stack([t.bits for t in X])
    arr = check_array(X, dtype=None, ensure_min_features=min_bits)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("X must contain only 0 and 1")
    return arr.astype(np.uint8, copy=False)


def to_trialset(X, source_label: str = "", qrng_label: str = "") -> TrialSet:
    if isinstance(X, TrialSet):
        return X
    arr = check_bits(X)
    return TrialSet(tuple(BitSequence(row) for row in arr), source_label=source_label, qrng_label=qrng_label)


def check_test_ids(tests, allowed=range(1, 19)) -> tuple[int, ...]:
    """Normalise ``"1,3,18"``, ints or iterables of ints into a sorted tuple."""
    if tests is None:
        return tuple(allowed)
    if isinstance(tests, str):
        try:
            tests = [int(t) for t in tests.replace(" ", "").split(",") if t]
        except ValueError:
            raise ValueError(f"test ids must be integers, got {tests!r}") from None
    elif isinstance(tests, int):
        tests = [tests]
    out = tuple(sorted(set(int(t) for t in tests)))
    bad = [t for t in out if t not in allowed]
    if bad or not out:
        raise ValueError(f"test ids must be in {min(allowed)}..{max(allowed)}, got {list(tests)}")
    return out
