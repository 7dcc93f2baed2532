import pytest

from rhxi import PrecisionContext


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(precision_bits=256, target_tol=1e-30)


@pytest.fixture(scope="session")
def ctx12():
    return PrecisionContext(precision_bits=256, target_tol=1e-12)


@pytest.fixture(autouse=True)
def _oracle_precision():
    # oracle arithmetic in the tests runs on mpmath's global context; the
    # package itself never touches it
    import mpmath

    with mpmath.workdps(80):
        yield
