import logfire
import pytest

from krein.fock import TruncatedBasis, truncated_basis


logfire.configure(send_to_logfire=False, console=False)


@pytest.fixture(scope="session")
def basis() -> TruncatedBasis:
    return truncated_basis(6)


@pytest.fixture(scope="session")
def small_basis() -> TruncatedBasis:
    return truncated_basis(3)
