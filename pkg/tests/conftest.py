"""
测试公共夹具
"""
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = ROOT / "configs"


@pytest.fixture
def rng():
    """固定种子的随机数发生器"""
    return np.random.default_rng(12345)


@pytest.fixture
def config_dir() -> Path:
    return CONFIG_DIR
