import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from libs.coefficients import build_coef_table  # noqa: E402
from libs.geometry import Params  # noqa: E402


@pytest.fixture(scope="session")
def params3():
    return Params(3, 0.0)


@pytest.fixture(scope="session")
def table3(params3):
    return build_coef_table(params3)


@pytest.fixture(scope="session")
def table3_alpha15():
    return build_coef_table(Params(3, 1.5))


@pytest.fixture(scope="session")
def table4():
    return build_coef_table(Params(4, 0.5))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
