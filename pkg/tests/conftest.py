from __future__ import annotations

import pytest

_LINES: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


def _line(num: int, ok: bool, detail: str) -> str:
    return f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture
def verdict(request):
    """``verdict(ok, detail)`` prints and records the PASS/FAIL line of the test's criterion."""
    num = request.node.get_closest_marker("criterion").args[0]

    def record(ok: bool, detail: str) -> bool:
        _LINES[num] = _line(num, ok, detail)
        print(_LINES[num])
        return ok

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    num = mark.args[0]
    if rep.failed and (num not in _LINES or "PASS" in _LINES[num]):
        msg = str(call.excinfo.value).splitlines()[0] if call.excinfo else "failed"
        _LINES[num] = _line(num, False, f"{call.excinfo.typename if call.excinfo else ''}: {msg}")


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_LINES):
        terminalreporter.write_line(_LINES[num])
