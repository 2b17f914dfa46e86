"""Command-line entry point: ``qrngtest {generate,test,battery,report,compare}``.

Exit codes: 0 every verdict SR (or reports identical for ``compare``),
1 at least one SNR (or reports differ), 2 usage or validation error.

Run options may come from a key = value file (``--config``), optionally
under a ``[run]`` header; command-line flags override it::

    [run]
    sources = biased:p0=0.52; biased_two_step; mt19937
    trials = 128
    shots = 8192
    seed = 7
    tests = 1-18
    output_dir = results
    i_max = 3
    max_combined_failures = 2
    dft_variant = corrected
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

from . import __version__
from .battery import (BatteryConfig, BatteryReport, compare_report, outcome_failed, render_grid,
                      run_battery, run_test)
from .bitseq import FORMATS, BitFormatError, load_trials, save_trials
from .sources import COMPARISON_KINDS, DEFAULT_SHOTS, DEFAULT_TRIALS, KINDS, GenerationJob, SourceSpec, generate, save_generated
from .validation import check_test_ids


class UsageError(Exception):
    pass


def parse_tests(text) -> tuple[int, ...]:
    """``"1,3,18"`` or ranges like ``"1-15,18"``."""
    if text is None:
        return tuple(range(1, 19))
    ids = []
    for part in str(text).replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            ids.extend(range(int(lo), int(hi) + 1))
        else:
            ids.append(int(part))
    return check_test_ids(ids)


_FLOAT_KEYS = {"p0", "b", "rho"}
_INT_KEYS = {"seed", "qubit_count"}


def parse_source(text: str, default_seed: int | None = None) -> SourceSpec:
    """``kind[:key=value,...]``, e.g. ``biased:p0=0.52,seed=3``."""
    kind, _, rest = text.strip().partition(":")
    kwargs = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad source option {item!r}; expected key=value")
        if key in _FLOAT_KEYS:
            kwargs[key] = float(value)
        elif key in _INT_KEYS:
            kwargs[key] = int(value)
        elif key == "label":
            kwargs[key] = value
        else:
            raise UsageError(f"unknown source option {key!r}")
    if "seed" not in kwargs and default_seed is not None:
        kwargs["seed"] = default_seed
    return SourceSpec(kind, **kwargs)


def _read_config(path) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    parser = configparser.ConfigParser()
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text  # a bare key = value file is allowed
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise UsageError(f"bad config file: {exc}") from None
    if "run" not in parser:
        raise UsageError(f"{path}: missing [run] section")
    return dict(parser["run"])


def _pick(args, cfg: dict, name: str, cast, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in cfg:
        return cast(cfg[name])
    return default


def _battery_config(args, cfg) -> BatteryConfig:
    return BatteryConfig(
        tests=parse_tests(_pick(args, cfg, "tests", str, None)),
        max_combined_failures=_pick(args, cfg, "max_combined_failures", int, 2),
        strict_subset=(parse_tests(args.strict_subset) if getattr(args, "strict_subset", None) else
                       parse_tests(cfg["strict_subset"]) if "strict_subset" in cfg else None),
        i_max=_pick(args, cfg, "i_max", int, None),
        dft_variant=_pick(args, cfg, "dft_variant", str, "corrected"),
    )


def _write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


# -- subcommands -----------------------------------------------------------

def cmd_generate(args) -> int:
    cfg = _read_config(args.config)
    seed = _pick(args, cfg, "seed", int, 0)
    kwargs = {k: getattr(args, k) for k in ("p0", "b", "rho") if getattr(args, k) is not None}
    if args.label:
        kwargs["label"] = args.label
    spec = SourceSpec(args.kind, seed=seed, **kwargs)
    job = GenerationJob(spec, trials=_pick(args, cfg, "trials", int, DEFAULT_TRIALS),
                        shots_per_trial=_pick(args, cfg, "shots", int, DEFAULT_SHOTS))
    out_dir = Path(_pick(args, cfg, "output_dir", str, "."))
    path = save_generated(generate(job), job, out_dir)
    print(f"wrote {path} ({job.trials} trials x {job.trial_bits} bits)")
    return 0


def cmd_test(args) -> int:
    tests = parse_tests(args.tests)
    config = BatteryConfig(tests=tests, i_max=args.i_max, dft_variant=args.dft_variant)
    tset = load_trials(args.file, args.format)
    records = []
    any_snr = False
    targets = []
    if args.level in ("trial", "both"):
        targets += [(f"trial {k}", t) for k, t in enumerate(tset.trials)]
    if args.level in ("combined", "both"):
        targets.append(("combined", tset.combined))
    for where, seq in targets:
        for t in tests:
            try:
                outcome = run_test(seq, t, config)
            except ValueError as exc:
                raise UsageError(f"test {t} on {where}: {exc}") from None
            rec = outcome.to_dict()
            rec["target"] = where
            records.append(rec)
            any_snr |= bool(outcome_failed(outcome))
    text = json.dumps(records, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 1 if any_snr else 0


def _resolve_sources(args, cfg) -> list:
    seed = _pick(args, cfg, "seed", int, 0)
    specs = []
    texts = list(args.source or [])
    if not texts and not args.input and "sources" in cfg:
        texts = [s for s in cfg["sources"].replace("\n", ";").split(";") if s.strip()]
    if args.comparison:
        texts += list(COMPARISON_KINDS)
    for text in texts:
        specs.append(parse_source(text, seed))
    return specs


def cmd_battery(args) -> int:
    cfg = _read_config(args.config)
    config = _battery_config(args, cfg)
    trials = _pick(args, cfg, "trials", int, DEFAULT_TRIALS)
    shots = _pick(args, cfg, "shots", int, DEFAULT_SHOTS)
    out_dir = Path(_pick(args, cfg, "output_dir", str, "battery-out"))
    specs = _resolve_sources(args, cfg)
    if not specs and not args.input:
        raise UsageError("no sources given; use --source, --comparison, --input or a config file")
    out_dir.mkdir(parents=True, exist_ok=True)
    reports, manifest_sources = [], []
    for spec in specs:
        job = GenerationJob(spec, trials=trials, shots_per_trial=shots)
        tset = generate(job)
        entry = {"spec": spec.to_dict(), "trials": trials, "shots_per_trial": shots}
        if not spec.deterministic or args.save_trials:
            trial_dir = out_dir / "trials"
            trial_dir.mkdir(exist_ok=True)
            save_trials(tset, trial_dir / f"{spec.label}.txt")
            entry["trial_file"] = f"trials/{spec.label}.txt"
        manifest_sources.append(entry)
        reports.append(run_battery(tset, config))
    for path in args.input or []:
        tset = load_trials(path, args.format, qrng_label=args.qrng_label)
        manifest_sources.append({"file": str(path), "format": args.format, "qrng_label": args.qrng_label})
        reports.append(run_battery(tset, config))
    labels = set()
    for r in reports:
        stem = _stem(r)
        if stem in labels:
            raise UsageError(f"duplicate source label {stem!r}; set label= in the source spec")
        labels.add(stem)
        (out_dir / f"{stem}.report.json").write_text(r.to_json(), encoding="utf-8")
    grid = render_grid(reports)
    (out_dir / "grid.txt").write_text(grid, encoding="utf-8")
    _write_json(out_dir / "manifest.json", {
        "tool": "qrngtest",
        "tool_version": __version__,
        "battery": {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(config).items()},
        "sources": manifest_sources,
    })
    sys.stdout.write(grid)
    return 0 if all(r.overall == "SR" for r in reports) else 1


def _stem(report: BatteryReport) -> str:
    return f"{report.source_label}_{report.qrng_label}" if report.qrng_label else report.source_label


def _export_figures(report: BatteryReport, out_dir: Path) -> None:
    stem = _stem(report)
    pvals = {t: s.get("values", []) for t, s in report.trial_stats.items() if int(t) <= 15}
    combined_p = {t: {"strict_pvalue": rec.get("strict_pvalue"), "pvalues": rec.get("pvalues", [])}
                  for t, rec in report.combined.items() if int(t) <= 15}
    _write_json(out_dir / f"{stem}.pvalues.json", {"trial": pvals, "combined": combined_p})
    for t in ("16", "17"):
        if t in report.combined:
            _write_json(out_dir / f"{stem}.test{t}.json", {
                "trial": report.trial_stats.get(t, {}).get("lhs_by_trial"),
                "trial_rhs": report.trial_stats.get(t, {}).get("rhs"),
                "combined": report.combined[t].get("per_i"),
            })
    if "18" in report.combined:
        _write_json(out_dir / f"{stem}.test18.json", {
            "trial": report.trial_stats.get("18", {}).get("unique_counts_by_trial"),
            "combined": report.combined["18"].get("unique_counts"),
            "critical_value": report.combined["18"].get("critical_value"),
        })


def cmd_report(args) -> int:
    reports = [BatteryReport.load(p) for p in args.reports]
    sys.stdout.write(render_grid(reports))
    if args.export:
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        for r in reports:
            _export_figures(r, out)
    return 0 if all(r.overall == "SR" for r in reports) else 1


def cmd_compare(args) -> int:
    a, b = BatteryReport.load(args.a), BatteryReport.load(args.b)
    diff = compare_report(a, b)
    sys.stdout.write(json.dumps(diff, indent=1) + "\n")
    return 1 if diff["color_deltas"] or diff["median_pvalue_deltas"] else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qrngtest", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate trials from a source model")
    g.add_argument("--kind", required=True, choices=KINDS)
    g.add_argument("--seed", type=int)
    g.add_argument("--p0", type=float)
    g.add_argument("--b", type=float)
    g.add_argument("--rho", type=float)
    g.add_argument("--trials", type=int)
    g.add_argument("--shots", type=int)
    g.add_argument("--label", default="")
    g.add_argument("--out", dest="output_dir")
    g.add_argument("--config")
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("test", help="run selected tests on a trial file")
    t.add_argument("file")
    t.add_argument("--tests", default="1-18")
    t.add_argument("--format", choices=FORMATS, default="ascii01")
    t.add_argument("--level", choices=("trial", "combined", "both"), default="both")
    t.add_argument("--i-max", type=int)
    t.add_argument("--dft-variant", choices=("corrected", "original"), default="corrected")
    t.add_argument("--out")
    t.set_defaults(func=cmd_test)

    b = sub.add_parser("battery", help="run the full battery on sources and render the grid")
    b.add_argument("--source", action="append", help="kind[:key=value,...]; repeatable")
    b.add_argument("--comparison", action="store_true", help="add the five comparison systems")
    b.add_argument("--input", action="append", help="existing trial file; repeatable")
    b.add_argument("--format", choices=FORMATS, default="ascii01")
    b.add_argument("--qrng-label", default="", help="QRNG label recorded for --input files")
    b.add_argument("--seed", type=int)
    b.add_argument("--trials", type=int)
    b.add_argument("--shots", type=int)
    b.add_argument("--tests")
    b.add_argument("--i-max", dest="i_max", type=int)
    b.add_argument("--max-combined-failures", dest="max_combined_failures", type=int)
    b.add_argument("--strict-subset", dest="strict_subset")
    b.add_argument("--dft-variant", dest="dft_variant", choices=("corrected", "original"))
    b.add_argument("--save-trials", action="store_true")
    b.add_argument("--out", dest="output_dir")
    b.add_argument("--config")
    b.set_defaults(func=cmd_battery)

    r = sub.add_parser("report", help="render saved reports and export figure data")
    r.add_argument("reports", nargs="+")
    r.add_argument("--export", metavar="DIR")
    r.set_defaults(func=cmd_report)

    c = sub.add_parser("compare", help="diff two saved reports")
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, BitFormatError, ValueError, OSError) as exc:
        print(f"qrngtest: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
