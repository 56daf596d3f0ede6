import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion implemented by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA[item.nodeid] = {"number": number, "title": title, "outcome": None, "detail": ""}


def pytest_runtest_logreport(report):
    entry = _CRITERIA.get(report.nodeid)
    if entry is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["outcome"] = report.outcome
        if report.failed:
            lines = [ln for ln in str(report.longrepr).splitlines() if ln.startswith("E ")]
            entry["detail"] = lines[0][1:].strip() if lines else ""


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for entry in sorted(_CRITERIA.values(), key=lambda e: e["number"]):
        status = "PASS" if entry["outcome"] == "passed" else "FAIL"
        line = f"{status} criterion {entry['number']:>2}: {entry['title']}"
        if status == "FAIL" and entry["detail"]:
            line += f"  [{entry['detail']}]"
        terminalreporter.write_line(line)
