from __future__ import annotations

import pytest

from plability import fixtures
from plability.parser import parse_products

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def load(name: str):
    products, diags = parse_products(fixtures.read(name))
    assert not [d for d in diags if d.is_error], diags
    return products


@pytest.fixture
def fig2():
    (product,) = load("fig2.plp")
    return product


@pytest.fixture
def door_ecu():
    return load("door_ecu.plp")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
