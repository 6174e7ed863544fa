"""Prints one PASS/FAIL line per acceptance criterion after the run."""
import re

_AC_PATTERN = re.compile(r"test_ac(\d+)_(\w+)")
_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = _AC_PATTERN.search(report.nodeid)
    if match:
        label = f"AC-{match.group(1)} {match.group(2)}"
        _results[label] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_results):
        terminalreporter.write_line(f"[{_results[label]}] {label}")
