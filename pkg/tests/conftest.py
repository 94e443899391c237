import re

_results: dict[str, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        outcome = "PASS" if report.passed else "FAIL"
        prev = _results.get(name)
        if prev is None or outcome == "FAIL":
            _results[name] = (outcome, report.duration)


def _label(name: str) -> str:
    m = re.match(r"test_c(\d+)_(.*)", name)
    if not m:
        return name
    return f"criterion {int(m.group(1)):2d} ({m.group(2).replace('_', ' ')})"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results):
        outcome, secs = _results[name]
        terminalreporter.write_line(f"{outcome}  {_label(name)}  [{secs:.1f}s]")
