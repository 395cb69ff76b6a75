import pytest

from zeckpell.pipeline import make_config, run_all

# one line per acceptance criterion, printed again in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ci_config():
    return make_config("ci")


@pytest.fixture(scope="session")
def ci_report(ci_config):
    return run_all(ci_config)


@pytest.fixture(scope="session")
def compat_report():
    return run_all(make_config("ci", paper_compat=True))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
