import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("quick", max_examples=20, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

# (criterion number, status, detail) lines collected by test_acceptance
ACCEPTANCE_LINES: list[tuple[int, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n, status, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")


@pytest.fixture(scope="session")
def fixture_path() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def involutions():
    from e6dirac.fixtures import load_involutions

    return load_involutions(FIXTURES / "kgb_involutions.json")


@pytest.fixture(scope="session")
def thetas(involutions):
    from e6dirac.fixtures import involutions_by_index

    return involutions_by_index(involutions)


@pytest.fixture(scope="session")
def auxiliary_thetas():
    from e6dirac.fixtures import involutions_by_index, load_involutions

    return involutions_by_index(load_involutions(FIXTURES / "kgb_auxiliary.json"))


@pytest.fixture(scope="session")
def usmall_set():
    from e6dirac.norms import enumerate_usmall

    return enumerate_usmall()


@pytest.fixture(scope="session")
def partition(involutions, usmall_set):
    from e6dirac.omega import omega_partition

    return omega_partition(involutions, usmall_set)


@pytest.fixture(scope="session")
def tables():
    from e6dirac.fixtures import load_tables

    return load_tables(FIXTURES)
