import pytest

# filled by the acceptance tests, printed once at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda x: (int(x.split()[1].rstrip(":").split("/")[0]), x)):
        terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    def record(n, label, ok, detail=""):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record
