"""Shared test configuration: hypothesis profile and JIT warm-up."""

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("suite")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the low-level kernels once so timed assertions measure the
    algorithms, not JIT compilation."""
    from cohit import hit

    hit.qp_basis(2, 6)
    hit.kameko_matrix(2, 1)
    yield
