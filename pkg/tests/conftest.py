import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

_verdicts = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number = marker.args[0]
    failed = report.failed
    if report.when == "call" or failed:
        prev = _verdicts.get(number)
        _verdicts[number] = (marker.kwargs.get("title", item.name),
                             "FAIL" if failed or (prev and prev[1] == "FAIL") else "PASS",
                             report.duration if report.when == "call" else 0.0)


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_verdicts):
        title, verdict, secs = _verdicts[number]
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}  ({secs:.1f}s)")
