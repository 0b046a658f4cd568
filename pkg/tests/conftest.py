from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from fihom.io import load_presentation
from fihom.modules import compile_presentation

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name):
    return FIXTURES / f"{name}.json"


@pytest.fixture
def load():
    def _load(name, window=None):
        P = load_presentation(fixture_path(name))
        return compile_presentation(P, window=window)
    return _load


# one line per acceptance criterion, echoed again after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
