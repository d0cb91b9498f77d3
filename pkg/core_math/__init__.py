"""
core_math 顶级模块
功能：真空噪声单位约定 + 特殊函数 + Fock 基展开
"""

from .conventions import VACUUM_VARIANCE, GaussianDist, FockVector, DomainError
from .special import (
    binary_entropy,
    normal_cdf,
    gaussian_outside_prob,
    gaussian_inside_prob,
    inverse_normal_cdf,
    loss_db_to_transmittance,
    squeezing_db,
    variance_from_squeezing_db,
)
from .fock import coherent_fock, squeezed_fock

__all__ = [
    # 约定与类型
    'VACUUM_VARIANCE',
    'GaussianDist',
    'FockVector',
    'DomainError',

    # 特殊函数
    'binary_entropy',
    'normal_cdf',
    'gaussian_outside_prob',
    'gaussian_inside_prob',
    'inverse_normal_cdf',
    'loss_db_to_transmittance',
    'squeezing_db',
    'variance_from_squeezing_db',

    # Fock 展开
    'coherent_fock',
    'squeezed_fock',
]

__version__ = "1.0.0"
__description__ = "数值基础：熵、高斯概率、Fock 展开"

import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())
