import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; returns ``ok`` so callers can assert on it."""

    def record(criterion, ok, detail=""):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
