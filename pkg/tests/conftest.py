from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


def golden_lines(name):
    """Non-comment, non-blank lines of a golden file."""
    text = (GOLDEN / name).read_text(encoding="utf-8")
    return [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


@pytest.fixture
def golden():
    return golden_lines


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
