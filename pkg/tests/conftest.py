import pytest

from steenrodext.steenrod import SteenrodAlgebra


@pytest.fixture(scope="session")
def alg():
    """Shared degree table; large enough for every non-acceptance test."""
    return SteenrodAlgebra(26)
