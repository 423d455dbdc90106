import logging

import pytest

ACCEPTANCE_LINES = {}


@pytest.fixture
def record_criterion():
    """Store one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""

    def record(number, passed, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])


@pytest.fixture(autouse=True)
def _quiet_cutoff_warnings(caplog):
    caplog.set_level(logging.WARNING)
    yield
