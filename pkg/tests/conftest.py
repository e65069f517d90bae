"""Acceptance bookkeeping: tests marked ``criterion(n, title)`` are grouped and
summarised as one PASS/FAIL line per criterion at the end of the run."""
from collections import defaultdict

_titles = {}
_node_criterion = {}
_results = defaultdict(lambda: {"passed": 0, "failed": 0, "skipped": 0})


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n = m.args[0]
            _titles.setdefault(n, m.args[1] if len(m.args) > 1 else "")
            _node_criterion[item.nodeid] = n


def pytest_runtest_logreport(report):
    n = _node_criterion.get(report.nodeid)
    if n is None:
        return
    if report.failed:
        _results[n]["failed"] += 1
    elif report.when == "call":
        _results[n]["passed" if report.passed else "skipped"] += 1
    elif report.skipped:
        _results[n]["skipped"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_titles):
        r = _results[n]
        ran = r["passed"] + r["failed"]
        verdict = "PASS" if ran and not r["failed"] and not r["skipped"] else "FAIL"
        terminalreporter.write_line(
            f"ACCEPTANCE {n} {_titles[n]}: {verdict} ({r['passed']} passed, {r['failed']} failed)"
        )
