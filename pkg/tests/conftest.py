import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def criterion_log():
    """Append ``(number, name, passed, detail)``; printed in the terminal summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_ACCEPTANCE_LINES, key=lambda r: r[0]):
        terminalreporter.write_line(
            f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name} -- {detail}"
        )
