"""Shared, cached decompositions so the expensive builds happen once per session."""

from __future__ import annotations

import functools

import pytest
from hypothesis import HealthCheck, settings

from vmoext.domain import make_domain
from vmoext.whitney import decompose

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def decomposition(name: str, level: int):
    return decompose(make_domain(name), level)


@pytest.fixture(scope="session")
def dec_cache():
    return decomposition


@functools.lru_cache(maxsize=None)
def fw_table(name: str, level: int):
    from vmoext.metrics import floyd_warshall_table

    return floyd_warshall_table(decomposition(name, level))


@functools.lru_cache(maxsize=None)
def kappa(name: str, level: int):
    from vmoext.metrics import estimate_kappa

    return estimate_kappa(decomposition(name, level))


ACCEPTANCE: dict = {}


def record(number: int, title: str, ok: bool, detail: str) -> str:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
