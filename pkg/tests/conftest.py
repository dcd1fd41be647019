import os

import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run slow tests (minutes)")
    parser.addoption("--seed", type=int, default=20240601, help="seed for randomized tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running test, needs --slow or ROBINLAB_SLOW=1")


def slow_enabled(config) -> bool:
    return config.getoption("--slow") or os.environ.get("ROBINLAB_SLOW") == "1"


def pytest_collection_modifyitems(config, items):
    if slow_enabled(config):
        return
    skip = pytest.mark.skip(reason="slow; pass --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def acceptance_line():
    def record(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
