import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, title = marker.args
        _ACCEPTANCE.append((number, title, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, verdict in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:2d} {verdict}: {title}")
