import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eiscong.fields import FieldOrder


@pytest.fixture(scope="session")
def Q():
    return FieldOrder.rational()


@pytest.fixture(scope="session")
def F2():
    return FieldOrder.real_quadratic(2)


@pytest.fixture(scope="session")
def F3():
    return FieldOrder.real_quadratic(3)


@pytest.fixture(scope="session")
def F5():
    return FieldOrder.real_quadratic(5)
