import functools

import pytest

from finitegap_nls.cli import Pipeline, bundled_config_path, load_config
from finitegap_nls.phase import solve_phase
from finitegap_nls.surface import BranchSet, build_surface

SYMMETRIC_G1 = BranchSet((-1 + 1j, 1 + 1j))
ASYMMETRIC_G1 = BranchSet((-0.7 + 0.8j, 1.2 + 1.3j))
G2 = BranchSet((-2 + 1j, 0.8j, 2 + 1j))
G3 = BranchSet((-3 + 1j, -1 + 0.7j, 1 + 0.9j, 3 + 1.1j))


@functools.lru_cache(maxsize=None)
def geometry(branch: BranchSet):
    return build_surface(branch)


@functools.lru_cache(maxsize=None)
def phase_model(branch: BranchSet):
    return solve_phase(geometry(branch))


@functools.lru_cache(maxsize=None)
def pipeline(name: str) -> Pipeline:
    return Pipeline(load_config(bundled_config_path(name)))


@pytest.fixture(scope="session")
def g1():
    return geometry(SYMMETRIC_G1)


@pytest.fixture(scope="session")
def g2():
    return geometry(G2)


@pytest.fixture(scope="session")
def g3():
    return geometry(G3)


# (criterion number, title, passed, detail), filled by test_acceptance
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d} {title}: {detail}")
