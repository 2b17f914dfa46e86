"""Trial-level and combined-level evaluation of the 18-test battery.

A test fails at trial level when the median per-trial result is SNR and
fails at combined level when its single run on the concatenated trials is
SNR.  The two outcomes give each test one of four colours:

=========  ===========  ==============
colour     trial level  combined level
=========  ===========  ==============
red        fail         fail
yellow     pass / n/a   fail
green      pass / n/a   pass
blue       fail         pass
=========  ===========  ==============
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .bitseq import BitSequence, TrialSet, partition
from .nist import ALPHA, NistParams, run_nist_test
from .normality import bayesian_test, borel_test
from .tbt import SUPPORTED as TBT_SUPPORTED
from .tbt import TbtOutcome, tbt_test

ALL_TESTS = tuple(range(1, 19))
COLOR_LETTERS = {"red": "R", "yellow": "Y", "green": "G", "blue": "B"}


@dataclass(frozen=True)
class BatteryConfig:
    """Options for a battery run.

    ``max_combined_failures`` and ``strict_subset`` define the overall call:
    SR needs zero trial-level failures and at most ``max_combined_failures``
    combined-level failures, all inside ``strict_subset`` when it is given.
    """

    tests: tuple[int, ...] = ALL_TESTS
    alpha: float = ALPHA
    max_combined_failures: int = 2
    strict_subset: tuple[int, ...] | None = None
    i_max: int | None = None
    dft_variant: str = "corrected"
    tbt_m: int = 8

    def __post_init__(self):
        tests = tuple(sorted(set(self.tests)))
        if not tests or any(t not in ALL_TESTS for t in tests):
            raise ValueError(f"tests must be a non-empty subset of 1..18, got {self.tests}")
        object.__setattr__(self, "tests", tests)
        if self.strict_subset is not None:
            object.__setattr__(self, "strict_subset", tuple(sorted(set(self.strict_subset))))
        if self.max_combined_failures < 0:
            raise ValueError("max_combined_failures must be >= 0")


def run_test(seq: BitSequence, test_id: int, config: BatteryConfig | None = None):
    """Run any of the 18 tests on one sequence with the battery's parameter rules.

    Returns a TestOutcome (1-15), LhsRhsOutcome (16, 17) or TbtOutcome (18).
    Sequences too short for tests 16-18 raise ValueError.
    """
    config = config or BatteryConfig()
    if 1 <= test_id <= 15:
        return run_nist_test(seq, NistParams(test_id, dft_variant=config.dft_variant))
    if test_id == 16:
        return borel_test(seq, config.i_max)
    if test_id == 17:
        return bayesian_test(seq, config.i_max)
    if test_id == 18:
        return tbt_test(seq, config.tbt_m)
    raise ValueError(f"test_id must be in 1..18, got {test_id}")


def outcome_failed(outcome, alpha: float = ALPHA) -> bool | None:
    """True for SNR, False for SR, None when the test could not be evaluated."""
    if not outcome.applicable:
        return None
    if hasattr(outcome, "strict_pvalue"):
        return outcome.strict_pvalue < alpha
    return outcome.verdict == "SNR"


def cell_color(trial_level: str, combined_level: str) -> str:
    trial_fail = trial_level == "fail"
    if combined_level == "fail":
        return "red" if trial_fail else "yellow"
    return "blue" if trial_fail else "green"


@dataclass(frozen=True)
class CellVerdict:
    test_id: int
    trial_level: str  # pass | fail | not_applicable
    combined_level: str  # pass | fail
    combined_applicable: bool = True
    color: str = field(init=False)

    def __post_init__(self):
        if self.trial_level not in ("pass", "fail", "not_applicable"):
            raise ValueError(f"bad trial_level {self.trial_level!r}")
        if self.combined_level not in ("pass", "fail"):
            raise ValueError(f"bad combined_level {self.combined_level!r}")
        object.__setattr__(self, "color", cell_color(self.trial_level, self.combined_level))


@dataclass
class BatteryReport:
    source_label: str
    qrng_label: str
    cells: list[CellVerdict]
    overall: str
    trial_stats: dict
    combined: dict
    meta: dict

    @property
    def trial_failures(self) -> list[int]:
        return [c.test_id for c in self.cells if c.trial_level == "fail"]

    @property
    def combined_failures(self) -> list[int]:
        return [c.test_id for c in self.cells if c.combined_level == "fail"]

    def cell(self, test_id: int) -> CellVerdict:
        for c in self.cells:
            if c.test_id == test_id:
                return c
        raise KeyError(test_id)

    def grid_row(self) -> str:
        return "".join(COLOR_LETTERS[c.color] for c in self.cells)

    def to_dict(self) -> dict:
        return {
            "source_label": self.source_label,
            "qrng_label": self.qrng_label,
            "overall": self.overall,
            "trial_failures": self.trial_failures,
            "combined_failures": self.combined_failures,
            "cells": [asdict(c) for c in self.cells],
            "trial_stats": self.trial_stats,
            "combined": self.combined,
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "BatteryReport":
        cells = [
            CellVerdict(c["test_id"], c["trial_level"], c["combined_level"], c.get("combined_applicable", True))
            for c in d["cells"]
        ]
        return cls(d["source_label"], d["qrng_label"], cells, d["overall"],
                   d.get("trial_stats", {}), d.get("combined", {}), d.get("meta", {}))

    @classmethod
    def load(cls, path) -> "BatteryReport":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _quartiles(values) -> dict:
    if not values:
        return {"count": 0}
    a = np.asarray(values, dtype=np.float64)
    q1, med, q3 = np.percentile(a, [25, 50, 75])
    return {"count": int(a.size), "min": float(a.min()), "q1": float(q1), "median": float(med),
            "q3": float(q3), "max": float(a.max())}


def _trial_level(test_id: int, trials, config: BatteryConfig):
    """Return (level, stats) for one test over all trials."""
    if test_id == 18 and any(t.n == 0 or t.n % TBT_SUPPORTED[config.tbt_m][0] for t in trials):
        return "not_applicable", {"reason": "trial length not a multiple of the TBT block length"}
    if test_id in (16, 17) and any(t.n < 32 for t in trials):
        return "not_applicable", {"reason": "trials shorter than 32 bits"}
    outcomes = [run_test(t, test_id, config) for t in trials]
    if test_id <= 15:
        pvals = [o.strict_pvalue for o in outcomes if o.applicable]
        if not pvals:
            return "not_applicable", {"reason": outcomes[0].reason}
        stats = _quartiles(pvals)
        stats["values"] = pvals
        return ("fail" if float(np.median(pvals)) < config.alpha else "pass"), stats
    if test_id in (16, 17):
        counts = [o.violations for o in outcomes]
        stats = _quartiles(counts)
        stats["values"] = counts
        stats["snr_trials"] = sum(1 for c in counts if c)
        stats["lhs_by_trial"] = [[list(lv.lhs_values) for lv in o.per_i] for o in outcomes]
        stats["rhs"] = [lv.rhs for lv in outcomes[0].per_i]
        return ("fail" if float(np.median(counts)) > 0 else "pass"), stats
    means = [o.mean_unique for o in outcomes]
    stats = _quartiles(means)
    stats["values"] = means
    stats["unique_counts_by_trial"] = [list(o.unique_counts) for o in outcomes]
    critical = outcomes[0].critical_value
    return ("fail" if float(np.median(means)) <= critical else "pass"), stats


def _combined_level(test_id: int, combined: BitSequence, config: BatteryConfig):
    """Return (failed, applicable, record) for one test on the combined sequence."""
    if test_id == 18:
        required = TBT_SUPPORTED[config.tbt_m][0]
        blocks, rem = partition(combined, required)
        if not blocks:
            return False, False, {"applicable": False, "reason": "combined sequence shorter than one block"}
        outcome: TbtOutcome = tbt_test(BitSequence(np.concatenate([b.bits for b in blocks])), config.tbt_m)
        rec = outcome.to_dict()
        rec["discarded_bits"] = rem
        return outcome.verdict == "SNR", True, rec
    if test_id in (16, 17) and combined.n < 32:
        return False, False, {"applicable": False, "reason": "combined sequence shorter than 32 bits"}
    outcome = run_test(combined, test_id, config)
    failed = outcome_failed(outcome, config.alpha)
    return bool(failed), failed is not None, outcome.to_dict()


def overall_verdict(cells: list[CellVerdict], config: BatteryConfig) -> str:
    trial_fail = [c.test_id for c in cells if c.trial_level == "fail"]
    comb_fail = [c.test_id for c in cells if c.combined_level == "fail"]
    if trial_fail or len(comb_fail) > config.max_combined_failures:
        return "SNR"
    if config.strict_subset is not None and any(t not in config.strict_subset for t in comb_fail):
        return "SNR"
    return "SR"


def run_battery(tset: TrialSet, config: BatteryConfig | None = None) -> BatteryReport:
    """Evaluate every configured test at trial and combined level."""
    config = config or BatteryConfig()
    if len(tset.trials) == 0:
        raise ValueError("trial set has no trials")
    if tset.trial_length is None:
        raise ValueError("trials have mixed lengths")
    cells, trial_stats, combined = [], {}, {}
    for test_id in config.tests:
        level, stats = _trial_level(test_id, tset.trials, config)
        failed, applicable, rec = _combined_level(test_id, tset.combined, config)
        trial_stats[str(test_id)] = stats
        combined[str(test_id)] = rec
        cells.append(CellVerdict(test_id, level, "fail" if failed else "pass", applicable))
    meta = {
        "tool_version": __version__,
        "n_trials": len(tset.trials),
        "trial_length": tset.trial_length,
        "combined_length": tset.combined.n,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(config).items()},
    }
    return BatteryReport(tset.source_label, tset.qrng_label, cells, overall_verdict(cells, config),
                         trial_stats, combined, meta)


def compare_report(a: BatteryReport, b: BatteryReport) -> dict:
    """Per-test colour changes and trial-level median P-value shifts from ``a`` to ``b``."""
    tests_a = [c.test_id for c in a.cells]
    tests_b = [c.test_id for c in b.cells]
    if tests_a != tests_b:
        raise ValueError(f"reports cover different tests: {tests_a} vs {tests_b}")
    colors = []
    medians = []
    for ca, cb in zip(a.cells, b.cells):
        if ca.color != cb.color:
            colors.append({"test_id": ca.test_id, "a": ca.color, "b": cb.color})
        if ca.test_id <= 15:
            ma = a.trial_stats.get(str(ca.test_id), {}).get("median")
            mb = b.trial_stats.get(str(ca.test_id), {}).get("median")
            if ma != mb:
                delta = None if ma is None or mb is None else mb - ma
                medians.append({"test_id": ca.test_id, "a": ma, "b": mb, "delta": delta})
    return {"a": a.source_label, "b": b.source_label, "color_deltas": colors, "median_pvalue_deltas": medians}


def render_grid(reports: list[BatteryReport]) -> str:
    """Fixed-width R/Y/G/B grid, one row per report, one column per test."""
    if not reports:
        return ""
    tests = [c.test_id for c in reports[0].cells]
    label_w = max(12, *(len(f"{r.source_label}/{r.qrng_label}") for r in reports))
    header = "source".ljust(label_w) + " " + " ".join(f"{t:>2}" for t in tests) + "  overall"
    lines = [header]
    for r in reports:
        cells = {c.test_id: c for c in r.cells}
        row = " ".join(f"{COLOR_LETTERS[cells[t].color]:>2}" for t in tests)
        lines.append(f"{r.source_label}/{r.qrng_label}".ljust(label_w) + " " + row + f"  {r.overall}")
    lines.append("")
    lines.append("R = fail/fail  Y = pass/fail  G = pass/pass  B = fail/pass  (trial/combined)")
    return "\n".join(lines) + "\n"
