"""Special functions used by the test statistics.

Thin wrappers over :mod:`scipy.special` so every test goes through one
place; accuracy is checked against mpmath in the test suite.
"""

from __future__ import annotations

import math

from scipy import special as _sp


def erfc(x: float) -> float:
    """Complementary error function."""
    return float(_sp.erfc(x))


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x)."""
    if x <= 0:
        return 1.0
    return float(_sp.gammaincc(a, x))


def lgamma(x):
    """Natural log of the gamma function; accepts scalars or arrays."""
    return _sp.gammaln(x)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def clip_p(p: float) -> float:
    """Clamp a P-value into [0, 1] against rounding spill."""
    return min(1.0, max(0.0, float(p)))
