import pytest

_criteria = {}
_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(config, items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _outcomes.get(report.nodeid, True)
        _outcomes[report.nodeid] = prev and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    grouped = {}
    for nodeid, (number, title) in _criteria.items():
        if nodeid in _outcomes:
            entry = grouped.setdefault(number, [title, 0, 0])
            entry[1] += 1
            entry[2] += int(_outcomes[nodeid])
    terminalreporter.section("acceptance criteria")
    for number in sorted(grouped):
        title, total, passed = grouped[number]
        mark = "PASS" if passed == total else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {mark}  {title}  ({passed}/{total} cases)")
