"""Prints one PASS/FAIL line per acceptance criterion after the run."""

_ACCEPTANCE = "test_acceptance.py::test_criterion["
_outcomes: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if _ACCEPTANCE not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        key = report.nodeid.split("[", 1)[1].rstrip("]")
        if hasattr(report, "wasxfail"):
            # expected failure: the criterion is still not met
            _outcomes[key] = ("FAIL", report.wasxfail)
        elif report.passed:
            _outcomes[key] = ("PASS", "")
        else:
            _outcomes[key] = ("FAIL", report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    from test_acceptance import CRITERIA

    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in CRITERIA:
        status, note = _outcomes.get(f"c{c.number:02d}", ("NOT RUN", ""))
        line = f"{status} {c.number:2d} {c.title}"
        tr.write_line(f"{line}: {note}" if note else line)
