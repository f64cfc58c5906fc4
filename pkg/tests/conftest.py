"""Shared fixtures; the acceptance summary is printed at the end of the run."""

from __future__ import annotations

import pytest

from chowwitt.fields import FieldModel

ACCEPTANCE: dict[str, tuple[str, str]] = {}


@pytest.fixture(params=["C", "R", "F3", "F5"])
def any_field(request) -> FieldModel:
    return FieldModel.parse(request.param)


@pytest.fixture
def real() -> FieldModel:
    return FieldModel.parse("R")


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE[name] = ("PASS" if report.passed else "FAIL", report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        status, _ = ACCEPTANCE[name]
        terminalreporter.write_line(f"{status}  {name}")
