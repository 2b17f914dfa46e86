"""Tests 1-15: worked examples, independent oracles and invariants."""

import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qrngtest.bitseq import BitSequence
from qrngtest.gf2 import gf2_rank
from qrngtest.nist import (_LONGEST_RUN_TABLE, _OVERLAPPING_PI, MIN_LENGTH, NistParams, _cumulative_sums,
                           _dft, _non_overlapping, applicable_tests, aperiodic_templates, longest_runs,
                           maurer_fn, overlapping_class_probabilities, random_excursions,
                           random_excursions_variant, rank_probabilities, resolve_max_params,
                           run_nist_test, strict_reduce, window_values)
from qrngtest.pidigits import pi_bits

mpmath.mp.dps = 30


def bits(text):
    return np.array([int(c) for c in text], dtype=np.uint8)


@pytest.fixture(scope="module")
def pi100():
    """The first 100 binary digits of pi, integer part included."""
    return np.concatenate([[1, 1], pi_bits(98)]).astype(np.uint8)


# -- independent recomputations ------------------------------------------------

def oracle_monobit(text):
    s = sum(1 if c == "1" else -1 for c in text)
    return float(mpmath.erfc(abs(s) / mpmath.sqrt(2 * len(text))))


def oracle_block_frequency(text, M):
    N = len(text) // M
    chi2 = 4 * M * sum((mpmath.mpf(text[k * M:(k + 1) * M].count("1")) / M - mpmath.mpf(1) / 2) ** 2
                       for k in range(N))
    return float(mpmath.gammainc(mpmath.mpf(N) / 2, chi2 / 2, mpmath.inf, regularized=True))


def oracle_runs(text):
    n = len(text)
    pi = mpmath.mpf(text.count("1")) / n
    v = 1 + sum(a != b for a, b in zip(text, text[1:]))
    return float(mpmath.erfc(abs(v - 2 * n * pi * (1 - pi)) / (2 * mpmath.sqrt(2 * n) * pi * (1 - pi))))


@pytest.mark.parametrize("test_id, text, M, want", [
    (1, "1011010101", None, 0.5270893),
    (2, "0110011010", 3, 0.8012520),
    (3, "1001101011", None, 0.1472323),
])
def test_small_examples_match_direct_computation(test_id, text, M, want):
    oracle = {1: oracle_monobit, 2: lambda t: oracle_block_frequency(t, M), 3: oracle_runs}[test_id]
    assert oracle(text) == pytest.approx(want, abs=1e-7)
    got = run_nist_test(BitSequence(text), NistParams(test_id, block_len=M)).strict_pvalue
    assert got == pytest.approx(oracle(text), abs=1e-12)


def test_pi_sequence_examples(pi100):
    seq = BitSequence(pi100)
    assert run_nist_test(seq, 1).strict_pvalue == pytest.approx(0.109599, abs=1e-6)
    assert run_nist_test(seq, NistParams(2, block_len=10)).strict_pvalue == pytest.approx(0.706438, abs=1e-6)
    assert run_nist_test(seq, 3).strict_pvalue == pytest.approx(0.500798, abs=1e-6)
    assert run_nist_test(seq, 13).pvalues == pytest.approx((0.219194, 0.114866), abs=1e-6)
    assert run_nist_test(seq, NistParams(12, serial_len=2)).strict_pvalue == pytest.approx(0.235301, abs=1e-6)
    text = "".join(map(str, pi100))
    assert run_nist_test(seq, 1).strict_pvalue == pytest.approx(oracle_monobit(text), abs=1e-12)
    assert run_nist_test(seq, 3).strict_pvalue == pytest.approx(oracle_runs(text), abs=1e-12)


def test_longest_run_example():
    text = ("11001100000101010110110001001100111000000000001001001101010100010001001111010110"
            "100000001101011111001100111001101101100010110010")
    out = run_nist_test(BitSequence(text), 4)
    assert out.statistics["nu"] == [4, 9, 3, 0]
    assert out.statistics["chi2"] == pytest.approx(4.882457, abs=1e-6)
    assert out.strict_pvalue == pytest.approx(0.180609, abs=1e-6)


def test_serial_and_entropy_examples():
    out = run_nist_test(BitSequence("0011011101"), NistParams(11, serial_len=3))
    assert out.labels == ("11.1", "11.2")
    assert out.pvalues == pytest.approx((0.808792, 0.670320), abs=1e-6)
    out = run_nist_test(BitSequence("0100110101"), NistParams(12, serial_len=3))
    assert out.strict_pvalue == pytest.approx(0.261961, abs=1e-6)


def test_cusum_small_example():
    pvals, stats = _cumulative_sums(bits("1011010111"))
    assert stats["z_forward"] == 4
    assert pvals[0] == pytest.approx(0.4116588, abs=1e-6)


def test_non_overlapping_example():
    pvals, stats = _non_overlapping(bits("10100100101110010110"), 3, ("001",), n_blocks=2)
    assert stats["mu"] == pytest.approx(1.0) and stats["sigma2"] == pytest.approx(0.46875)
    assert pvals[0] == pytest.approx(0.344154, abs=1e-6)


def test_maurer_statistic_example():
    fn, K = maurer_fn(bits("01011010011101010111"), 2, 4)
    assert K == 6
    assert fn == pytest.approx(1.1949875, abs=1e-7)


def oracle_excursion_counts(text):
    """Per-cycle visit counts of each state, by a plain loop over the walk."""
    walk = [0]
    for c in text:
        walk.append(walk[-1] + (1 if c == "1" else -1))
    if walk[-1] != 0:
        walk.append(0)
    cycles, cur = [], []
    for v in walk[1:]:
        if v == 0:
            cycles.append(cur)
            cur = []
        else:
            cur.append(v)
    return cycles, walk


def test_random_excursions_example():
    text = "0110110101"
    cycles, walk = oracle_excursion_counts(text)
    J = len(cycles)
    assert J == 3
    # x = +1, recomputed with exact class probabilities
    nu = [0] * 6
    for c in cycles:
        nu[min(c.count(1), 5)] += 1
    pi = [mpmath.mpf(1) / 2] + [mpmath.mpf(1) / 4 * mpmath.mpf(1) / 2 ** (k - 1) for k in range(1, 5)]
    pi.append(mpmath.mpf(1) / 2 * mpmath.mpf(1) / 16)
    chi2 = sum((nu[k] - J * pi[k]) ** 2 / (J * pi[k]) for k in range(6))
    want = float(mpmath.gammainc(mpmath.mpf(5) / 2, chi2 / 2, mpmath.inf, regularized=True))
    pvals, J2 = random_excursions(bits(text))
    assert J2 == 3
    assert pvals[4] == pytest.approx(want, abs=1e-12)
    assert pvals[4] == pytest.approx(0.502529, abs=1e-4)
    variant, _ = random_excursions_variant(bits(text))
    xi = walk.count(1)
    assert variant[9] == pytest.approx(float(mpmath.erfc(abs(xi - J) / mpmath.sqrt(2 * J * 2))), abs=1e-12)
    assert variant[9] == pytest.approx(0.683091, abs=1e-6)


# -- oracles for the spectral, template and table-driven tests ----------------

def brute_dft_pvalue(eps, variant):
    n = eps.size
    x = 2.0 * eps - 1.0
    k = np.arange(n // 2)[:, None]
    j = np.arange(n)[None, :]
    mod = np.abs((x[None, :] * np.exp(-2j * np.pi * k * j / n)).sum(axis=1))
    T = math.sqrt(math.log(20.0) * n)
    n1 = int(np.sum(mod < T))
    d = (n1 - 0.95 * n / 2) / math.sqrt(n * 0.95 * 0.05 / (4 if variant == "corrected" else 2))
    return math.erfc(abs(d) / math.sqrt(2))


@pytest.mark.parametrize("variant", ["corrected", "original"])
def test_dft_matches_direct_transform(rng, variant):
    for n in (64, 100, 257, 1000):
        eps = rng.integers(0, 2, n).astype(np.uint8)
        assert _dft(eps, variant)[0][0] == pytest.approx(brute_dft_pvalue(eps, variant), abs=1e-12)


def test_rank_probabilities_match_enumeration():
    counts = {}
    for v in range(1 << 9):
        m = np.array([(v >> k) & 1 for k in range(9)], dtype=np.uint8).reshape(3, 3)
        r = gf2_rank(m)
        counts[r] = counts.get(r, 0) + 1
    full, nxt, rest = rank_probabilities(3, 3)
    assert full == pytest.approx(counts[3] / 512, abs=1e-12)
    assert nxt == pytest.approx(counts[2] / 512, abs=1e-12)
    assert rest == pytest.approx((counts[1] + counts[0]) / 512, abs=1e-12)
    assert rank_probabilities() == pytest.approx((0.2888, 0.5776, 0.1336), abs=1e-4)


def test_overlapping_probabilities_match_enumeration():
    m, M, K = 2, 10, 5
    counts = np.zeros(K + 1)
    for v in range(1 << M):
        s = format(v, f"0{M}b")
        hits = sum(s[i:i + m] == "1" * m for i in range(M - m + 1))
        counts[min(hits, K)] += 1
    assert overlapping_class_probabilities(m, M, K) == pytest.approx(counts / 2 ** M, abs=1e-12)
    assert overlapping_class_probabilities(9, 1032, 5) == pytest.approx(_OVERLAPPING_PI, abs=2e-6)


def longest_run_cdf(M, k):
    """P(longest run of ones in M fair bits <= k), by dynamic programming."""
    # f[j] = probability of no run longer than k so far, ending in j ones
    f = np.zeros(k + 1)
    f[0] = 1.0
    for _ in range(M):
        g = np.zeros(k + 1)
        g[0] = 0.5 * f.sum()
        g[1:] = 0.5 * f[:-1]
        f = g
    return f.sum()


@pytest.mark.parametrize("row, tol", [(2, 1e-10), (1, 1e-8), (0, 2e-3)])
def test_longest_run_tables_match_dp(row, tol):
    # the M = 10^4 table is only published to 4 decimals and drifts from the exact values
    _, M, edge, probs = _LONGEST_RUN_TABLE[row]
    K = len(probs) - 1
    cdf = [longest_run_cdf(M, edge + j) for j in range(K)]
    exact = [cdf[0]] + [cdf[j] - cdf[j - 1] for j in range(1, K)] + [1 - cdf[-1]]
    assert np.allclose(exact, probs, atol=tol)


def test_longest_runs_against_string_scan(rng):
    blocks = rng.integers(0, 2, (200, 37)).astype(np.uint8)
    want = [max(map(len, "".join(map(str, r)).split("0"))) for r in blocks]
    assert longest_runs(blocks).tolist() == want


def test_template_file_matches_enumeration():
    def aperiodic(t):
        return not any(t[k:] == t[: len(t) - k] for k in range(1, len(t)))

    enumerated = tuple(t for t in ("".join(p) for p in itertools.product("01", repeat=9)) if aperiodic(t))
    assert aperiodic_templates(9) == enumerated
    assert len(enumerated) == 148
    assert len(aperiodic_templates(2)) == 2


def test_window_values():
    assert window_values(bits("0110"), 2).tolist() == [1, 3, 2]
    assert window_values(bits("0110"), 2, wrap=True).tolist() == [1, 3, 2, 0]


# -- parameters and applicability ---------------------------------------------

def test_resolve_max_params():
    assert resolve_max_params(11, 1_048_576).serial_len == 17
    assert resolve_max_params(2, 8192).block_len == 81
    with pytest.raises(ValueError, match="minimum|needs"):
        resolve_max_params(10, 1000)
    assert resolve_max_params(12, 8192).serial_len == 7
    assert resolve_max_params(10, 1_048_576).block_len == 5000
    assert resolve_max_params(2, 8192) == resolve_max_params(2, 8192)


def test_applicable_tests():
    assert applicable_tests(8192) == {1, 2, 3, 4, 6, 11, 12, 13}
    assert applicable_tests(10) == {1, 3}
    assert applicable_tests(1_048_576) == set(range(1, 16))
    assert set(range(1, 16)) - applicable_tests(8192) == {5, 7, 8, 9, 10, 14, 15}


def test_short_sequences_are_not_applicable():
    out = run_nist_test(BitSequence("0101"), 9)
    assert not out.applicable and out.strict_pvalue is None and out.verdict is None


def test_strict_reduce():
    assert strict_reduce([0.5, 0.009, 0.9]) == 0.009
    assert strict_reduce([0.5]) == 0.5
    with pytest.raises(ValueError):
        strict_reduce([])


def test_strict_rule_boundary():
    from qrngtest.nist import TestOutcome

    at = TestOutcome(1, (0.01,), ("1",), NistParams(1))
    below = TestOutcome(1, (0.2, 0.0099), ("a", "b"), NistParams(1))
    assert at.verdict == "SR" and below.verdict == "SNR"


# -- invariants ----------------------------------------------------------------

@given(st.lists(st.integers(0, 1), min_size=1, max_size=2000))
def test_monobit_complement_invariance(bits_list):
    a = BitSequence(bits_list)
    assert run_nist_test(a, 1).pvalues == run_nist_test(a.complement(), 1).pvalues


@pytest.mark.parametrize("test_id", range(1, 16))
def test_pvalues_in_unit_interval_and_deterministic(test_id, rng):
    seq = BitSequence(rng.integers(0, 2, 1_048_576 if test_id in (5, 7, 8, 9, 10, 14, 15) else 8192))
    a, b = run_nist_test(seq, test_id), run_nist_test(seq, test_id)
    assert a == b
    if a.applicable:
        assert all(0.0 <= p <= 1.0 for p in a.pvalues)
        assert len(a.labels) == len(a.pvalues)
    else:
        assert test_id in (14, 15)  # too few cycles is possible for a random walk


def test_template_test_reports_every_template(rng):
    out = run_nist_test(BitSequence(rng.integers(0, 2, 1_048_576)), 7)
    assert len(out.pvalues) == 148 and out.labels == aperiodic_templates(9)


def test_all_zero_sequence_fails_frequency_tests():
    z = BitSequence([0] * 8192)
    for t in (1, 2, 3, 13):
        assert run_nist_test(z, t).verdict == "SNR"


def test_min_length_table_is_consistent():
    for t, lo in MIN_LENGTH.items():
        assert t in applicable_tests(lo) and (lo == 1 or t not in applicable_tests(lo - 1))
