import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _pi_cache(tmp_path_factory, monkeypatch):
    # keep the pi-bit cache out of the user's home directory
    monkeypatch.setenv("QRNGTEST_CACHE", str(tmp_path_factory.getbasetemp() / "pi-cache"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def gate(request):
    """Record one acceptance criterion's outcome; all are listed in the terminal summary."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        print(line)
        request.config._acceptance_lines.append(line)
        return ok

    return record


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    if config._acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(config._acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
