"""Shared pytest plumbing.

The acceptance module emits one summary line per criterion.  Capture
would normally swallow the lines for passing tests, so they are also
collected here and replayed in a terminal section after the run.
"""
import sys

import pytest

CRITERION_LINES = []


@pytest.fixture
def criterion():
    """Report one acceptance criterion: print its line, keep it for the
    end-of-run summary, and fail the test when the criterion fails."""

    def _finish(num: int, ok: bool, text: str):
        line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} {text}"
        CRITERION_LINES.append(line)
        print(line, file=sys.__stdout__, flush=True)
        assert ok, line

    return _finish


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERION_LINES):
            terminalreporter.write_line(line)
