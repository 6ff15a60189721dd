"""Shared fixtures: the acceptance-criteria verdict reporter."""

import pytest

_VERDICTS = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per release criterion, then assert it.

    Lines are replayed in a terminal-summary section so they survive output
    capture and appear once each in any pytest run.
    """

    def _report(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
        _VERDICTS.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.line(line)
