import numpy as np
import pytest


def pytest_addoption(parser):
    parser.addoption("--run-stretch", action="store_true", default=False,
                     help="run the multi-hour stretch reproductions")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-stretch"):
        return
    skip = pytest.mark.skip(reason="stretch run; pass --run-stretch")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    calls = []

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        calls.append(line)
        print(line)
        return ok

    yield record
    if not calls:
        ACCEPTANCE_LINES.append(f"{request.node.name}: FAIL  raised before reaching a verdict")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
