import numpy as np
import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def record_criterion():
    """Collect one pass/fail line per acceptance criterion."""
    def record(label: str, ok: bool, detail: str = ""):
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else ""))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
