"""Statistical-randomness battery for quantum and pseudo-random bit sources."""

__version__ = "0.1.0"

from .bitseq import BitSequence, TrialSet, combine, load_trials, partition, save_trials  # noqa: E402
from .battery import BatteryConfig, BatteryReport, compare_report, run_battery  # noqa: E402
from .nist import NistParams, TestOutcome, applicable_tests, run_nist_test, strict_reduce  # noqa: E402
from .normality import bayesian_test, borel_test  # noqa: E402
from .sources import GenerationJob, SourceSpec, generate  # noqa: E402
from .tbt import tbt_test  # noqa: E402

__all__ = [
    "BitSequence", "TrialSet", "combine", "load_trials", "partition", "save_trials",
    "BatteryConfig", "BatteryReport", "compare_report", "run_battery",
    "NistParams", "TestOutcome", "applicable_tests", "run_nist_test", "strict_reduce",
    "bayesian_test", "borel_test", "GenerationJob", "SourceSpec", "generate", "tbt_test",
]
