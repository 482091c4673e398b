import os
import sys

import numpy as np
import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from laurent_field import field_settings  # noqa: E402
from mollifier_forge import MollifierSpec, build_mollifier  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def exact_field():
    with field_settings("exact", 16) as settings:
        yield settings


@pytest.fixture
def float_field():
    with field_settings("float", 16) as settings:
        yield settings


@pytest.fixture(scope="session")
def mollifiers():
    """n = 1..4 的磨光核，整个测试会话共享"""
    return {n: build_mollifier(MollifierSpec(n, 401)) for n in range(1, 5)}
