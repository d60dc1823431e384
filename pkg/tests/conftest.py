import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def record_criterion():
    def record(key: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES[key] = f"{'PASS' if ok else 'FAIL'}  {key}" + (f"  ({detail})" if detail else "")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
