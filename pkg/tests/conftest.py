"""Shared test configuration.

The hypothesis profile is derandomized so a run is reproducible and any
counterexample it prints can be replayed exactly.  The acceptance tests
report one verdict line per criterion through the `acceptance` fixture;
those lines are echoed in the terminal summary so a plain `pytest -v` run
ends with the full criterion scoreboard.
"""

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance():
    """Record a named acceptance verdict and assert it.

    The line is captured even when the assertion fails, so the summary
    always shows one pass/fail line per criterion that ran.
    """

    def record(name: str, ok: bool, detail: str = "") -> None:
        line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
