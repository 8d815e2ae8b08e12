"""Collects one pass/fail line per acceptance criterion and prints them at the end of the run."""

import pytest

_LINES = []


class Criterion:
    def __init__(self, label: str):
        self.label = label

    def report(self, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {self.label}: {detail}"
        _LINES.append(line)
        print(line)
        assert ok, line


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    label = marker.args[0] if marker else request.node.name
    suffix = request.node.callspec.id if hasattr(request.node, "callspec") else ""
    return Criterion(f"{label} [{suffix}]" if suffix else label)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
