import json
import os
import sys

import pytest

HERE = os.path.dirname(__file__)
sys.path.insert(0, HERE)

_ACCEPTANCE_LINES = []


def record_criterion(number: int, title: str, passed: bool, detail: str) -> str:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} :: {detail}"
    _ACCEPTANCE_LINES.append((number, line))
    print(line)
    return line


@pytest.fixture(scope="session")
def oracle_values():
    with open(os.path.join(HERE, "oracle_values.json")) as fh:
        return json.load(fh)


def as_complex(pair):
    return complex(pair[0], pair[1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
