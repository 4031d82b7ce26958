import sys
from importlib import resources

import pytest

from ggsflow.chain import build_complex
from ggsflow.io import parse_pair


def load_fixture(name):
    text = resources.files("ggsflow").joinpath("data", f"{name}.ggs").read_text(encoding="utf-8")
    return parse_pair(text)


FIXTURES = ["example_5_1", "example_7_1", "empty"]


@pytest.fixture
def ex51():
    return load_fixture("example_5_1")


@pytest.fixture
def ex71():
    return load_fixture("example_7_1")


@pytest.fixture
def ex71_complex(ex71):
    return build_complex(ex71)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
