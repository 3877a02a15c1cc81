import pytest

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: (int(s.split()[1].strip("C:ab")), s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    def record(label, ok, detail, elapsed, limit):
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        line = f"{status} {label}: {detail} [{elapsed:.2f}s / {limit:g}s]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
        assert within, line

    return record
