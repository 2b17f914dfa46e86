"""scikit-learn style wrappers around the battery.

``X`` is always a 2-D 0/1 array with one trial per row (or a TrialSet).

>>> battery = RandomnessBattery(tests=(1, 3, 18)).fit(X)   # doctest: +SKIP
>>> battery.report_.overall                                   # doctest: +SKIP
'SR'
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .battery import BatteryConfig, outcome_failed, run_battery, run_test
from .bitseq import BitSequence
from .nist import ALPHA
from .validation import check_bits, check_test_ids, to_trialset


class RandomnessBattery(BaseEstimator):
    """Run the battery over a set of trials.

    ``fit`` builds :attr:`report_` from the trials and their concatenation.
    ``predict`` labels each row ``"SR"`` or ``"SNR"`` using only the tests
    applicable at that row's length; ``score`` is the fraction labelled SR.
    """

    def __init__(self, tests=None, alpha=ALPHA, max_combined_failures=2, strict_subset=None,
                 i_max=None, dft_variant="corrected", source_label="", qrng_label=""):
        self.tests = tests
        self.alpha = alpha
        self.max_combined_failures = max_combined_failures
        self.strict_subset = strict_subset
        self.i_max = i_max
        self.dft_variant = dft_variant
        self.source_label = source_label
        self.qrng_label = qrng_label

    def _config(self) -> BatteryConfig:
        return BatteryConfig(
            tests=check_test_ids(self.tests),
            alpha=self.alpha,
            max_combined_failures=self.max_combined_failures,
            strict_subset=None if self.strict_subset is None else check_test_ids(self.strict_subset),
            i_max=self.i_max,
            dft_variant=self.dft_variant,
        )

    def fit(self, X, y=None):
        tset = to_trialset(X, self.source_label, self.qrng_label)
        self.config_ = self._config()
        self.report_ = run_battery(tset, self.config_)
        self.n_features_in_ = tset.trial_length
        return self

    def _row_verdict(self, row: np.ndarray) -> str:
        seq = BitSequence(row)
        for t in self.config_.tests:
            try:
                outcome = run_test(seq, t, self.config_)
            except ValueError:
                continue  # too short for 16-18
            if outcome_failed(outcome, self.alpha):
                return "SNR"
        return "SR"

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "report_")
        arr = check_bits(X)
        return np.array([self._row_verdict(row) for row in arr], dtype=object)

    def score(self, X, y=None) -> float:
        return float(np.mean(self.predict(X) == "SR"))


class TestStatistic(TransformerMixin, BaseEstimator):
    """Map each trial to the per-trial quantity the battery's median rule uses.

    That is:
    the smallest P-value for tests 1-15, the number of bound violations for
    16-17 and the mean distinct-window count for 18.  Rows where the test is
    not applicable give NaN.
    """

    __test__ = False

    def __init__(self, test_id=1, i_max=None, dft_variant="corrected"):
        self.test_id = test_id
        self.i_max = i_max
        self.dft_variant = dft_variant

    def fit(self, X, y=None):
        arr = check_bits(X)
        check_test_ids(self.test_id)
        self.n_features_in_ = arr.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_in_")
        arr = check_bits(X)
        config = BatteryConfig(tests=(self.test_id,), i_max=self.i_max, dft_variant=self.dft_variant)
        out = np.full((arr.shape[0], 1), np.nan)
        for k, row in enumerate(arr):
            try:
                o = run_test(BitSequence(row), self.test_id, config)
            except ValueError:
                continue
            if self.test_id <= 15:
                if o.applicable:
                    out[k, 0] = o.strict_pvalue
            elif self.test_id <= 17:
                out[k, 0] = o.violations
            else:
                out[k, 0] = o.mean_unique
        return out
