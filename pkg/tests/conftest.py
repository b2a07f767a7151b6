import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nlvc import harness  # noqa: E402


@pytest.fixture(scope="session")
def fixed_h_tables():
    """Both strategies on h = 2**-12 (the expensive run, shared across modules)."""
    return harness.run_convergence("fixed_h", "both")


@pytest.fixture(scope="session")
def quadratic_tables():
    return harness.run_convergence("quadratic", "both")


@pytest.fixture(scope="session")
def linear_table():
    return harness.run_convergence("linear", "neumann")


@pytest.fixture(scope="session")
def consistency():
    return harness.run_consistency()
