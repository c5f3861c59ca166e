import pytest

from constructions.action_algebra import build_action_algebra
from constructions.witness import build_B
from groups.action import natural_action
from groups.catalog import cyclic, symmetric


@pytest.fixture(scope="session")
def s3():
    return symmetric(3)


@pytest.fixture(scope="session")
def s3_action(s3):
    """A(S3, {1, 2, 3}, α) с естественным действием."""

    return build_action_algebra(s3, natural_action(s3))


@pytest.fixture(scope="session")
def c2_action():
    C2 = cyclic(2)
    return build_action_algebra(C2, natural_action(C2))


@pytest.fixture(scope="session")
def witness_2_4():
    """B(2, 4) при p = 3, q = 2: |P| = 324."""

    return build_B(2, 4, 3, 2)
