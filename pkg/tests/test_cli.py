import json
import subprocess
import sys

import pytest

from qrngtest.cli import main, parse_source, parse_tests


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_helpers():
    assert parse_tests("1,3,18") == (1, 3, 18)
    assert parse_tests("1-3,18") == (1, 2, 3, 18)
    spec = parse_source("biased:p0=0.55,seed=3")
    assert (spec.kind, spec.p0, spec.seed) == ("biased", 0.55, 3)
    assert parse_source("mt19937", default_seed=9).seed == 9


def test_generate(tmp_path, capsys):
    code, out, _ = run(["generate", "--kind", "biased", "--p0", "0.52", "--trials", 128, "--seed", 7,
                        "--out", tmp_path], capsys)
    assert code == 0
    lines = (tmp_path / "biased.txt").read_text().splitlines()
    assert len(lines) == 128 and {len(ln) for ln in lines} == {8192}
    meta = json.loads((tmp_path / "biased.meta.json").read_text())
    assert meta["spec"]["seed"] == 7


def test_generate_type3_width(tmp_path, capsys):
    assert run(["generate", "--kind", "qrng_type3", "--trials", 2, "--out", tmp_path], capsys)[0] == 0
    assert {len(ln) for ln in (tmp_path / "qrng_type3.txt").read_text().splitlines()} == {32768}


def test_generate_rejects_bad_probability(capsys):
    code, _, err = run(["generate", "--kind", "biased", "--p0", "1.5"], capsys)
    assert code == 2 and "p0 out of range" in err


def test_test_command_exit_codes(tmp_path, capsys):
    zeros = tmp_path / "zeros.txt"
    zeros.write_text("0" * 1000 + "\n")
    assert run(["test", zeros, "--tests", "1"], capsys)[0] == 1
    odd = tmp_path / "odd.txt"
    odd.write_text("01" * 5000 + "\n")
    code, _, err = run(["test", odd, "--tests", "18"], capsys)
    assert code == 2 and "length not multiple of 2048" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("01x\n")
    assert run(["test", bad], capsys)[0] == 2
    assert run(["test", tmp_path / "missing.txt"], capsys)[0] == 2


def test_test_command_records(tmp_path, capsys):
    assert run(["generate", "--kind", "ideal_qrng", "--trials", 2, "--seed", 1, "--out", tmp_path], capsys)[0] == 0
    code, out, _ = run(["test", tmp_path / "ideal_qrng.txt", "--tests", "1,16"], capsys)
    records = json.loads(out)
    assert code == 0
    assert [r["target"] for r in records] == ["trial 0", "trial 0", "trial 1", "trial 1", "combined", "combined"]
    borel = [r for r in records if r["test_id"] == 16][0]
    assert all(len(lv["lhs_values"]) == 2 ** lv["i"] for lv in borel["per_i"])


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["battery", "--trials", "many"])
    assert exc.value.code == 2
    assert run(["battery", "--tests", "0,19", "--source", "biased"], capsys)[0] == 2
    assert run(["battery"], capsys)[0] == 2


def test_battery_report_compare(tmp_path, capsys):
    out_dir = tmp_path / "run"
    args = ["battery", "--source", "biased", "--source", "biased_two_step", "--trials", 8, "--seed", 0,
            "--tests", "1,3,18", "--out", out_dir]
    code, grid, _ = run(args, capsys)
    assert code == 1  # the biased source is SNR
    header = grid.splitlines()[0].split()
    assert header[1:4] == ["1", "3", "18"] and header[-1] == "overall"
    assert len([ln for ln in grid.splitlines() if "/comparison" in ln]) == 2
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["tool_version"] and manifest["sources"][0]["spec"]["seed"] == 0

    reports = sorted(out_dir.glob("*.report.json"))
    assert len(reports) == 2
    code, _, _ = run(["report", *reports, "--export", tmp_path / "fig"], capsys)
    assert code == 1
    assert (tmp_path / "fig" / "biased_comparison.pvalues.json").exists()
    tbt = json.loads((tmp_path / "fig" / "biased_comparison.test18.json").read_text())
    assert len(tbt["trial"]) == 8 and len(tbt["trial"][0]) == 4

    code, out, _ = run(["compare", reports[0], reports[1]], capsys)
    assert code == 1 and json.loads(out)["color_deltas"]
    assert run(["compare", reports[0], reports[0]], capsys)[0] == 0


def test_battery_is_byte_identical_on_rerun(tmp_path, capsys):
    for name in ("a", "b"):
        run(["battery", "--source", "mt19937", "--source", "qrng_type1:p0=0.51", "--trials", 4,
             "--seed", 5, "--out", tmp_path / name], capsys)
    files = sorted(p.name for p in (tmp_path / "a").iterdir() if p.is_file())
    assert "grid.txt" in files and "manifest.json" in files
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes(), f


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"sources = biased; ideal_qrng\ntrials = 4\ntests = 1,3\nseed = 2\noutput_dir = {tmp_path / 'cfg'}\n")
    run(["battery", "--config", cfg, "--tests", "1"], capsys)
    rep = json.loads((tmp_path / "cfg" / "ideal_qrng_basic.report.json").read_text())
    assert [c["test_id"] for c in rep["cells"]] == [1]
    assert rep["meta"]["n_trials"] == 4


def test_os_csprng_trials_are_kept(tmp_path, capsys):
    run(["battery", "--source", "os_csprng", "--trials", 2, "--tests", "1", "--out", tmp_path], capsys)
    kept = tmp_path / "trials" / "os_csprng.txt"
    assert kept.exists()
    # re-running from the stored file reproduces the report
    run(["battery", "--input", kept, "--tests", "1", "--out", tmp_path / "again"], capsys)
    first = json.loads((tmp_path / "os_csprng_comparison.report.json").read_text())
    again = json.loads((tmp_path / "again" / "os_csprng.report.json").read_text())
    assert first["cells"] == again["cells"] and first["trial_stats"] == again["trial_stats"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qrngtest", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "qrngtest" in proc.stdout
