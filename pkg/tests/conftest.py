import pytest

from posfreq.core import PacketSpec

ACCEPTANCE_LINES = []


@pytest.fixture
def spec():
    return PacketSpec(0.0, 0.5)


@pytest.fixture
def narrow():
    return PacketSpec(0.0, 0.01)


@pytest.fixture
def record():
    """Append one pass/fail line for an acceptance criterion and print it."""

    def _record(number, name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {name}: {detail}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
