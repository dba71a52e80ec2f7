import pytest

ACCEPTANCE = {}


@pytest.fixture
def report():
    """Record one acceptance line: ``report(n, passed, detail)``."""
    def record(n, passed, detail=""):
        ACCEPTANCE[n] = (bool(passed), detail)
        print(f"{'PASS' if passed else 'FAIL'}  criterion {n}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {n}: {detail}")
