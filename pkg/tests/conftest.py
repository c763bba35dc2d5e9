from pathlib import Path

import pytest

import naturaltt

STDLIB = Path(naturaltt.__file__).parent / "stdlib"
NEGATIVE = Path(__file__).parent / "negative"


@pytest.fixture
def stdlib() -> Path:
    return STDLIB


def expected_rule(path: Path) -> str:
    """The rule a negative file names on its ``-- expect:`` header line."""
    first = path.read_text(encoding="utf-8").splitlines()[0]
    assert first.startswith("-- expect:"), path
    return first.split(":", 1)[1].strip()


# PASS/FAIL lines from the acceptance suite, repeated in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
