import sys
from pathlib import Path

# lets test modules share strategies and helpers
sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import settings

# first calls may compile numba kernels, so per-example deadlines would be flaky
settings.register_profile("bagrefine", deadline=None, derandomize=True)
settings.load_profile("bagrefine")

# criterion lines collected by test_acceptance, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
