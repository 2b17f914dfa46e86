"""The fifteen NIST SP 800-22 statistical tests with a strict reading.

Every test returns a :class:`TestOutcome`.  Multi-P-value tests (7, 11,
13, 14, 15) are reduced with :func:`strict_reduce`, i.e. the smallest
P-value decides, and parameterised tests default to the largest block
parameter their validity rules allow (:func:`resolve_max_params`).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from importlib import resources

import numpy as np

from .bitseq import BitSequence
from .gf2 import linear_complexity, matrix_ranks
from .special import clip_p, erfc, igamc, normal_cdf

ALPHA = 0.01

TEST_NAMES = {
    1: "Monobit",
    2: "Frequency Within a Block",
    3: "Runs",
    4: "Longest Run of Ones in a Block",
    5: "Binary Matrix Rank",
    6: "Discrete Fourier Transform",
    7: "Non-overlapping Template Matching",
    8: "Overlapping Template Matching",
    9: "Maurer's Universal Statistical",
    10: "Linear Complexity",
    11: "Serial",
    12: "Approximate Entropy",
    13: "Cumulative Sums",
    14: "Random Excursions",
    15: "Random Excursions Variant",
}

# Recommended minimum lengths when parameters are resolved automatically.
MIN_LENGTH = {
    1: 1,
    2: 100,
    3: 2,
    4: 128,
    5: 38_912,
    6: 1_000,
    7: 1_000_000,
    8: 1_000_000,
    9: 387_840,
    10: 1_000_000,
    11: 32,
    12: 128,
    13: 100,
    14: 1_000_000,
    15: 1_000_000,
}

DFT_VARIANTS = ("corrected", "original")


@dataclass(frozen=True)
class NistParams:
    """Test parameters; ``None`` means resolve from the sequence length."""

    test_id: int
    block_len: int | None = None
    template_len: int | None = None
    serial_len: int | None = None
    dft_variant: str = "corrected"

    def __post_init__(self):
        if self.test_id not in TEST_NAMES:
            raise ValueError(f"NIST test_id must be in 1..15, got {self.test_id}")
        if self.dft_variant not in DFT_VARIANTS:
            raise ValueError(f"dft_variant must be one of {DFT_VARIANTS}")
        for name in ("block_len", "template_len", "serial_len"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive, got {v}")

    @property
    def is_auto(self) -> bool:
        return self.block_len is None and self.template_len is None and self.serial_len is None


@dataclass(frozen=True)
class TestOutcome:
    test_id: int
    pvalues: tuple[float, ...]
    labels: tuple[str, ...]
    params_used: NistParams
    applicable: bool = True
    reason: str = ""
    statistics: dict = field(default_factory=dict, compare=False)

    __test__ = False  # not a pytest class

    @property
    def strict_pvalue(self) -> float | None:
        return strict_reduce(self.pvalues) if self.pvalues else None

    @property
    def verdict(self) -> str | None:
        if not self.applicable:
            return None
        return "SNR" if self.strict_pvalue < ALPHA else "SR"

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id,
            "name": TEST_NAMES[self.test_id],
            "applicable": self.applicable,
            "reason": self.reason,
            "pvalues": list(self.pvalues),
            "labels": list(self.labels),
            "strict_pvalue": self.strict_pvalue,
            "verdict": self.verdict,
            "params_used": asdict(self.params_used),
            "statistics": self.statistics,
        }


def strict_reduce(pvalues) -> float:
    """Smallest P-value: one failing P-value fails the whole test."""
    pvalues = list(pvalues)
    if not pvalues:
        raise ValueError("strict_reduce needs at least one P-value")
    return min(pvalues)


def _floor_log2(n: int) -> int:
    return n.bit_length() - 1


def resolve_max_params(test_id: int, n: int) -> NistParams:
    """Largest valid block parameter for tests 2, 10, 11 and 12 at length ``n``.

    * 2: ``M = n // 100`` so at least 100 blocks remain.
    * 10: ``M = min(5000, n // 200)``, which must reach 500.
    * 11: ``m = floor(log2 n) - 3`` (``m < floor(log2 n) - 2``).
    * 12: ``m = floor(log2 n) - 6`` (``m < floor(log2 n) - 5``).
    """
    if test_id == 2:
        if n < MIN_LENGTH[2]:
            raise ValueError(f"block frequency needs n >= {MIN_LENGTH[2]}, got {n}")
        return NistParams(2, block_len=n // 100)
    if test_id == 10:
        if n < MIN_LENGTH[10]:
            raise ValueError(f"linear complexity needs n >= {MIN_LENGTH[10]}, got {n}")
        return NistParams(10, block_len=min(5000, n // 200))
    if test_id == 11:
        m = _floor_log2(n) - 3 if n > 0 else 0
        if m < 2:
            raise ValueError(f"serial test needs n >= {MIN_LENGTH[11]}, got {n}")
        return NistParams(11, serial_len=m)
    if test_id == 12:
        m = _floor_log2(n) - 6 if n > 0 else 0
        if m < 1:
            raise ValueError(f"approximate entropy needs n >= {MIN_LENGTH[12]}, got {n}")
        return NistParams(12, serial_len=m)
    raise ValueError(f"no maximal-parameter rule for test {test_id}")


def applicable_tests(n: int) -> set[int]:
    """Tests whose recommended minimum length is met by ``n`` bits."""
    return {t for t, lo in MIN_LENGTH.items() if n >= lo}


@lru_cache(maxsize=None)
def aperiodic_templates(m: int = 9) -> tuple[str, ...]:
    """Aperiodic templates of length ``m`` in ascending order.

    Length 9 is read from the bundled data file; other lengths are enumerated.
    """
    if m == 9:
        text = resources.files("qrngtest").joinpath("data/templates9.txt").read_text()
        return tuple(ln for ln in text.split("\n") if ln)
    out = []
    for v in range(1 << m):
        t = format(v, f"0{m}b")
        if all(t[k:] != t[:m - k] for k in range(1, m)):
            out.append(t)
    return tuple(out)


def window_values(eps: np.ndarray, m: int, wrap: bool = False) -> np.ndarray:
    """Integer value of every overlapping m-bit window (first bit most significant)."""
    e = np.asarray(eps, dtype=np.int64)
    if wrap and m > 1:
        e = np.concatenate([e, e[: m - 1]])
    count = e.size - m + 1
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    v = np.zeros(count, dtype=np.int64)
    for j in range(m):
        v = (v << 1) | e[j : j + count]
    return v


# -- individual tests --------------------------------------------------------

def _monobit(eps):
    n = eps.size
    s = 2 * int(eps.sum()) - n
    s_obs = abs(s) / math.sqrt(n)
    return [erfc(s_obs / math.sqrt(2))], {"S_n": s, "s_obs": s_obs}


def _block_frequency(eps, M):
    n = eps.size
    N = n // M
    props = eps[: N * M].reshape(N, M).mean(axis=1)
    chi2 = 4.0 * M * float(np.sum((props - 0.5) ** 2))
    return [igamc(N / 2.0, chi2 / 2.0)], {"N": N, "chi2": chi2}


def _runs(eps):
    n = eps.size
    pi = float(eps.mean())
    tau = 2.0 / math.sqrt(n)
    if abs(pi - 0.5) >= tau or pi in (0.0, 1.0):
        return [0.0], {"pi": pi, "pretest": "failed"}
    v_obs = 1 + int(np.count_nonzero(eps[1:] != eps[:-1]))
    num = abs(v_obs - 2.0 * n * pi * (1 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1 - pi)
    return [erfc(num / den)], {"pi": pi, "V_obs": v_obs}


_LONGEST_RUN_TABLE = (
    # (min n, M, bin lower edge, class probabilities)
    (750_000, 10_000, 10, (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
    (6_272, 128, 4, (0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847)),
    (128, 8, 1, (0.21484375, 0.3671875, 0.23046875, 0.1875)),
)


def longest_runs(blocks: np.ndarray) -> np.ndarray:
    """Longest run of ones in each row of a 0/1 matrix."""
    N, M = blocks.shape
    padded = np.zeros((N, M + 2), dtype=np.int8)
    padded[:, 1:-1] = blocks
    d = np.diff(padded.ravel())
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    out = np.zeros(N, dtype=np.int64)
    if starts.size:
        np.maximum.at(out, starts // (M + 2), ends - starts)
    return out


def _longest_run(eps):
    n = eps.size
    for lo, M, edge, probs in _LONGEST_RUN_TABLE:
        if n >= lo:
            break
    K = len(probs) - 1
    N = n // M
    runs = longest_runs(eps[: N * M].reshape(N, M))
    classes = np.clip(runs - edge, 0, K)
    nu = np.bincount(classes, minlength=K + 1)
    p = np.array(probs)
    chi2 = float(np.sum((nu - N * p) ** 2 / (N * p)))
    return [igamc(K / 2.0, chi2 / 2.0)], {"M": M, "N": N, "nu": nu.tolist(), "chi2": chi2}


def rank_probabilities(rows: int = 32, cols: int = 32) -> tuple[float, float, float]:
    """Probabilities of full rank, full rank - 1, and lower for a random binary matrix."""

    def p(r):
        prod = 1.0
        for i in range(r):
            prod *= (1 - 2.0 ** (i - rows)) * (1 - 2.0 ** (i - cols)) / (1 - 2.0 ** (i - r))
        return 2.0 ** (r * (rows + cols - r) - rows * cols) * prod

    full = min(rows, cols)
    p_full, p_next = p(full), p(full - 1)
    return p_full, p_next, 1.0 - p_full - p_next


def _matrix_rank(eps):
    ranks = matrix_ranks(eps, 32, 32)
    N = ranks.size
    f_full = int(np.count_nonzero(ranks == 32))
    f_next = int(np.count_nonzero(ranks == 31))
    obs = np.array([f_full, f_next, N - f_full - f_next])
    exp = N * np.array(rank_probabilities(32, 32))
    chi2 = float(np.sum((obs - exp) ** 2 / exp))
    return [math.exp(-chi2 / 2.0)], {"N": N, "counts": obs.tolist(), "chi2": chi2}


def _dft(eps, variant):
    n = eps.size
    x = 2.0 * eps - 1.0
    mod = np.abs(np.fft.rfft(x))[: n // 2]
    T = math.sqrt(math.log(1 / 0.05) * n)
    n0 = 0.95 * n / 2.0
    n1 = int(np.count_nonzero(mod < T))
    var = n * 0.95 * 0.05 / (4.0 if variant == "corrected" else 2.0)
    d = (n1 - n0) / math.sqrt(var)
    return [erfc(abs(d) / math.sqrt(2))], {"N0": n0, "N1": n1, "d": d, "variant": variant}


def _non_overlapping(eps, m, templates, n_blocks=8):
    n = eps.size
    M = n // n_blocks
    mu = (M - m + 1) / 2.0 ** m
    var = M * (1 / 2.0 ** m - (2 * m - 1) / 2.0 ** (2 * m))
    # Aperiodic templates cannot overlap themselves, so a plain window count
    # within each block equals the skip-ahead scan.
    counts = np.empty((n_blocks, 1 << m), dtype=np.int64)
    for j in range(n_blocks):
        vals = window_values(eps[j * M : (j + 1) * M], m)
        counts[j] = np.bincount(vals, minlength=1 << m)
    idx = np.array([int(t, 2) for t in templates])
    W = counts[:, idx]
    chi2 = ((W - mu) ** 2).sum(axis=0) / var
    pvals = [igamc(n_blocks / 2.0, c / 2.0) for c in chi2.tolist()]
    return pvals, {"M": M, "N": n_blocks, "mu": mu, "sigma2": var}


# Class probabilities for m = 9, M = 1032, K = 5.
_OVERLAPPING_PI = (0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865)


def overlapping_class_probabilities(m: int, M: int, K: int = 5) -> np.ndarray:
    """P(number of overlapping all-ones m-runs in a random M-bit block = k), k < K, and >= K.

    Dynamic programme over (current trailing-ones run capped at m, count capped at K).
    """
    dist = np.zeros((m + 1, K + 1))
    dist[0, 0] = 1.0
    for _ in range(M):
        nxt = np.zeros_like(dist)
        nxt[0] += 0.5 * dist.sum(axis=0)
        for r in range(m + 1):
            r2 = min(r + 1, m)
            if r2 == m:
                shifted = np.zeros(K + 1)
                shifted[1:] = dist[r, :-1]
                shifted[K] += dist[r, K]
                nxt[r2] += 0.5 * shifted
            else:
                nxt[r2] += 0.5 * dist[r]
        dist = nxt
    return dist.sum(axis=0)


def _overlapping(eps, m):
    n = eps.size
    M = 1032
    K = 5
    N = n // M
    probs = np.array(_OVERLAPPING_PI) if m == 9 else overlapping_class_probabilities(m, M, K)
    target = (1 << m) - 1
    vals = window_values(eps[: N * M], m)
    # windows lying entirely inside a block: start offsets 0..M-m
    starts = np.arange(vals.size)
    inside = (starts % M) <= M - m
    hits = (vals == target) & inside
    per_block = np.bincount(starts[hits] // M, minlength=N)
    nu = np.bincount(np.minimum(per_block, K), minlength=K + 1)
    chi2 = float(np.sum((nu - N * probs) ** 2 / (N * probs)))
    return [igamc(K / 2.0, chi2 / 2.0)], {"M": M, "N": N, "nu": nu.tolist(), "chi2": chi2}


_MAURER_TABLE = {
    # L: (expected value, variance)
    6: (5.2177052, 2.954),
    7: (6.1962507, 3.125),
    8: (7.1836656, 3.238),
    9: (8.1764248, 3.311),
    10: (9.1723243, 3.356),
    11: (10.170032, 3.384),
    12: (11.168765, 3.401),
    13: (12.168070, 3.410),
    14: (13.167693, 3.416),
    15: (14.167488, 3.419),
    16: (15.167379, 3.421),
}
_MAURER_THRESHOLDS = (
    (1_059_061_760, 16), (496_435_200, 15), (231_669_760, 14), (107_560_960, 13),
    (49_643_520, 12), (22_753_280, 11), (10_342_400, 10), (4_654_080, 9),
    (2_068_480, 8), (904_960, 7), (387_840, 6),
)


def maurer_block_len(n: int) -> int:
    for lo, L in _MAURER_THRESHOLDS:
        if n >= lo:
            return L
    raise ValueError(f"Maurer's test needs n >= 387840, got {n}")


def maurer_fn(eps, L: int, Q: int) -> tuple[float, int]:
    """Universal statistic f_n and the number of test blocks K."""
    n = eps.size
    total = n // L
    K = total - Q
    vals = eps[: total * L].reshape(total, L).astype(np.int64) @ (1 << np.arange(L - 1, -1, -1))
    idx = np.arange(1, total + 1)
    order = np.argsort(vals, kind="stable")
    sv = vals[order]
    prev = np.zeros(total, dtype=np.int64)
    same = np.flatnonzero(sv[1:] == sv[:-1])
    prev[order[same + 1]] = idx[order[same]]
    test = slice(Q, total)
    fn = float(np.sum(np.log2(idx[test] - prev[test]))) / K
    return fn, K


def _maurer(eps):
    n = eps.size
    L = maurer_block_len(n)
    Q = 10 * (1 << L)
    fn, K = maurer_fn(eps, L, Q)
    expected, variance = _MAURER_TABLE[L]
    c = 0.7 - 0.8 / L + (4 + 32 / L) * K ** (-3 / L) / 15
    sigma = c * math.sqrt(variance / K)
    return [erfc(abs(fn - expected) / (math.sqrt(2) * sigma))], {"L": L, "Q": Q, "K": K, "fn": fn}


_LC_PI = (0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833)


def _linear_complexity(eps, M):
    n = eps.size
    N = n // M
    mu = M / 2.0 + (9 + (-1) ** (M + 1)) / 36.0 - (M / 3.0 + 2 / 9.0) * 2.0 ** -M
    sign = 1 if M % 2 == 0 else -1
    edges = (-2.5, -1.5, -0.5, 0.5, 1.5, 2.5)
    nu = np.zeros(7, dtype=np.int64)
    for k in range(N):
        L = linear_complexity(eps[k * M : (k + 1) * M])
        T = sign * (L - mu) + 2 / 9.0
        nu[int(np.searchsorted(edges, T, side="left"))] += 1
    p = np.array(_LC_PI)
    chi2 = float(np.sum((nu - N * p) ** 2 / (N * p)))
    return [igamc(3.0, chi2 / 2.0)], {"M": M, "N": N, "nu": nu.tolist(), "chi2": chi2}


def _psi2(eps, m):
    if m <= 0:
        return 0.0
    n = eps.size
    counts = np.bincount(window_values(eps, m, wrap=True), minlength=1 << m)
    return float((1 << m) / n * np.dot(counts.astype(np.float64), counts) - n)


def _serial(eps, m):
    p0, p1, p2 = _psi2(eps, m), _psi2(eps, m - 1), _psi2(eps, m - 2)
    d1 = p0 - p1
    d2 = p0 - 2 * p1 + p2
    return (
        [igamc(2.0 ** (m - 2), d1 / 2.0), igamc(2.0 ** (m - 3), d2 / 2.0)],
        {"m": m, "del1": d1, "del2": d2},
    )


def _phi(eps, m):
    if m == 0:
        return 0.0
    n = eps.size
    counts = np.bincount(window_values(eps, m, wrap=True), minlength=1 << m)
    c = counts[counts > 0] / n
    return float(np.sum(c * np.log(c)))


def _approximate_entropy(eps, m):
    n = eps.size
    apen = _phi(eps, m) - _phi(eps, m + 1)
    chi2 = 2.0 * n * (math.log(2) - apen)
    return [igamc(2.0 ** (m - 1), chi2 / 2.0)], {"m": m, "ApEn": apen, "chi2": chi2}


def _cusum_p(n: int, z: int) -> float:
    if z == 0:
        return 1.0
    sq = math.sqrt(n)
    s1 = 0.0
    for k in range(int((-n / z + 1) / 4), int((n / z - 1) / 4) + 1):
        s1 += normal_cdf((4 * k + 1) * z / sq) - normal_cdf((4 * k - 1) * z / sq)
    s2 = 0.0
    for k in range(int((-n / z - 3) / 4), int((n / z - 1) / 4) + 1):
        s2 += normal_cdf((4 * k + 3) * z / sq) - normal_cdf((4 * k + 1) * z / sq)
    return 1.0 - s1 + s2


def _cumulative_sums(eps):
    x = 2 * eps.astype(np.int64) - 1
    n = x.size
    z_fwd = int(np.max(np.abs(np.cumsum(x))))
    z_bwd = int(np.max(np.abs(np.cumsum(x[::-1]))))
    return [_cusum_p(n, z_fwd), _cusum_p(n, z_bwd)], {"z_forward": z_fwd, "z_backward": z_bwd}


def _excursion_walk(eps):
    s = np.cumsum(2 * eps.astype(np.int64) - 1)
    # A walk already ending at zero closes its last cycle itself.
    walk = np.concatenate([[0], s, [0]] if s.size and s[-1] != 0 else [[0], s])
    zeros = walk == 0
    J = int(np.count_nonzero(zeros)) - 1
    cycle = np.cumsum(zeros) - 1
    return walk, cycle, J


def excursion_cycle_floor(n: int) -> float:
    return max(0.005 * math.sqrt(n), 500.0)


def random_excursions(eps, min_cycles: float = 0.0):
    walk, cycle, J = _excursion_walk(eps)
    if J < min_cycles or J == 0:
        return None, J
    states = (-4, -3, -2, -1, 1, 2, 3, 4)
    pvals = []
    for x in states:
        visits = np.bincount(cycle[walk == x], minlength=J)[:J]
        nu = np.bincount(np.minimum(visits, 5), minlength=6)
        ax = abs(x)
        pi = [1 - 1 / (2 * ax)]
        pi += [1 / (4 * ax * ax) * (1 - 1 / (2 * ax)) ** (k - 1) for k in range(1, 5)]
        pi.append(1 / (2 * ax) * (1 - 1 / (2 * ax)) ** 4)
        pi = np.array(pi)
        chi2 = float(np.sum((nu - J * pi) ** 2 / (J * pi)))
        pvals.append(igamc(2.5, chi2 / 2.0))
    return pvals, J


def random_excursions_variant(eps, min_cycles: float = 0.0):
    walk, _, J = _excursion_walk(eps)
    if J < min_cycles or J == 0:
        return None, J
    pvals = []
    for x in (*range(-9, 0), *range(1, 10)):
        xi = int(np.count_nonzero(walk == x))
        pvals.append(erfc(abs(xi - J) / math.sqrt(2.0 * J * (4 * abs(x) - 2))))
    return pvals, J


# -- dispatcher --------------------------------------------------------------

def _resolve(params: NistParams, n: int) -> NistParams:
    t = params.test_id
    if t in (2, 10) and params.block_len is None:
        return replace(params, block_len=resolve_max_params(t, n).block_len)
    if t in (11, 12) and params.serial_len is None:
        return replace(params, serial_len=resolve_max_params(t, n).serial_len)
    if t in (7, 8) and params.template_len is None:
        return replace(params, template_len=9)
    return params


def _structural_min(params: NistParams) -> int:
    t = params.test_id
    if t in (2, 10):
        return params.block_len
    if t == 7:
        return 8 * params.template_len
    if t == 8:
        return 1032
    if t in (11, 12):
        return params.serial_len + 1
    return MIN_LENGTH[t]


def _labels(test_id, params, count):
    if test_id == 7:
        return aperiodic_templates(params.template_len)
    if test_id == 11:
        return ("11.1", "11.2")
    if test_id == 13:
        return ("13.1", "13.2")
    if test_id == 14:
        return tuple(f"x={x}" for x in (-4, -3, -2, -1, 1, 2, 3, 4))
    if test_id == 15:
        return tuple(f"x={x}" for x in (*range(-9, 0), *range(1, 10)))
    return (str(test_id),) * count


def run_nist_test(seq: BitSequence | np.ndarray, params: NistParams | int) -> TestOutcome:
    """Run one of tests 1..15 on ``seq``.

    A sequence below the test's minimum length, or a random-excursions walk
    with too few cycles, gives ``applicable=False`` and no P-values.
    """
    if isinstance(params, int):
        params = NistParams(params)
    eps = seq.bits if isinstance(seq, BitSequence) else np.asarray(seq, dtype=np.uint8)
    n = int(eps.size)
    t = params.test_id
    if params.is_auto and n < MIN_LENGTH[t]:
        return TestOutcome(t, (), (), params, applicable=False,
                           reason=f"n={n} below minimum length {MIN_LENGTH[t]}")
    resolved = _resolve(params, n)
    lo = _structural_min(resolved)
    if n < lo:
        return TestOutcome(t, (), (), resolved, applicable=False,
                           reason=f"n={n} below minimum length {lo}")
    if t == 1:
        pvals, stats = _monobit(eps)
    elif t == 2:
        pvals, stats = _block_frequency(eps, resolved.block_len)
    elif t == 3:
        pvals, stats = _runs(eps)
    elif t == 4:
        pvals, stats = _longest_run(eps)
        resolved = replace(resolved, block_len=stats["M"])
    elif t == 5:
        pvals, stats = _matrix_rank(eps)
    elif t == 6:
        pvals, stats = _dft(eps, resolved.dft_variant)
    elif t == 7:
        pvals, stats = _non_overlapping(eps, resolved.template_len, aperiodic_templates(resolved.template_len))
    elif t == 8:
        pvals, stats = _overlapping(eps, resolved.template_len)
    elif t == 9:
        pvals, stats = _maurer(eps)
        resolved = replace(resolved, block_len=stats["L"])
    elif t == 10:
        if resolved.block_len < 2:
            return TestOutcome(t, (), (), resolved, applicable=False, reason="block length below 2")
        pvals, stats = _linear_complexity(eps, resolved.block_len)
    elif t == 11:
        pvals, stats = _serial(eps, resolved.serial_len)
    elif t == 12:
        pvals, stats = _approximate_entropy(eps, resolved.serial_len)
    elif t == 13:
        pvals, stats = _cumulative_sums(eps)
    else:
        floor = excursion_cycle_floor(n) if params.is_auto else 0.0
        fn = random_excursions if t == 14 else random_excursions_variant
        pvals, J = fn(eps, floor)
        stats = {"J": J}
        if pvals is None:
            return TestOutcome(t, (), (), resolved, applicable=False,
                               reason=f"insufficient cycles: J={J} < {floor:g}", statistics=stats)
    pvals = tuple(clip_p(p) for p in pvals)
    return TestOutcome(t, pvals, tuple(_labels(t, resolved, len(pvals))), resolved, statistics=stats)
