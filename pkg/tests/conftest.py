import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match:
        return
    key = (int(match.group(1)), match.group(2))
    failed = report.failed
    if report.when == "call" or failed:
        _ACCEPTANCE[key] = _ACCEPTANCE.get(key, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (number, name), ok in sorted(_ACCEPTANCE.items()):
        label = name.replace("_", " ")
        terminalreporter.write_line(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {label}")
