"""Collects outcomes of tests marked ``acceptance(criterion)`` and prints one verdict line per criterion."""
import pytest

_outcomes: dict[str, list[bool]] = {}
_notes: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(criterion): test belongs to the numbered acceptance criterion")


@pytest.fixture
def acceptance_note(request):
    """Attach a short remark to the verdict line of this test's criterion."""
    marker = request.node.get_closest_marker("acceptance")

    def note(text: str) -> None:
        _notes.setdefault(str(marker.args[0]), []).append(text)

    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    key = str(marker.args[0])
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(key, []).append(report.passed)


def _order(key: str):
    head = key.split("(")[0]
    return (int(head) if head.isdigit() else 99, key)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_outcomes, key=_order):
        verdict = "PASS" if all(_outcomes[key]) else "FAIL"
        extra = f"  [{'; '.join(_notes[key])}]" if key in _notes else ""
        terminalreporter.write_line(f"ACCEPTANCE criterion {key}: {verdict}{extra}")
