from __future__ import annotations

import pytest

from homothety.g3 import Case2Params, case1_metric, case2_metric
from homothety.geometry import curvature
from homothety.kernel import expr


@pytest.fixture(scope="session")
def case1_bundle():
    return curvature(case1_metric(expr("t/r")))


@pytest.fixture(scope="session")
def case2_params():
    return Case2Params()


@pytest.fixture(scope="session")
def case2_bundle(case2_params):
    return curvature(case2_metric(case2_params))
