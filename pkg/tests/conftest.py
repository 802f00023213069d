import pytest


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for key, value in report.user_properties:
        if key == "acceptance":
            pytest_runtest_logreport.sink[report.nodeid] = value


pytest_runtest_logreport.sink = {}


def pytest_terminal_summary(terminalreporter):
    lines = sorted(pytest_runtest_logreport.sink.values(),
                   key=lambda s: int(s.split()[1]))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
