import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import LINES  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(LINES):
        terminalreporter.write_line(LINES[k])
