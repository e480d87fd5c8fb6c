"""Shared test plumbing: the acceptance-line recorder.

Acceptance tests call record_acceptance once each; the collected lines are
printed in a terminal section at the end of the run so every criterion shows
one visible pass/fail line regardless of capture settings.
"""

from __future__ import annotations

_acceptance_lines: list[str] = []


def record_acceptance(claim: str, passed: bool, detail: str) -> None:
    word = "PASS" if passed else "FAIL"
    _acceptance_lines.append(f"acceptance: {claim}: {word} ({detail})")


def pytest_terminal_summary(terminalreporter) -> None:
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)
