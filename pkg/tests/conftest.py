import os

import pytest

# keep MC thread count predictable on shared runners
os.environ.setdefault("HARTOGS_THREADS", "4")

_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record one PASS/FAIL line for the terminal summary."""

    def record(label: str, passed: bool, detail: str = ""):
        line = f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else "")
        _LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
