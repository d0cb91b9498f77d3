"""
特殊函数：二元熵、高斯尾概率、正态分位数、dB 换算
"""
import logging

import numpy as np
from scipy import special

from .conventions import VACUUM_VARIANCE, GaussianDist, DomainError

logger = logging.getLogger(__name__)

_LN2 = np.log(2.0)


def binary_entropy(e: float) -> float:
    """h(e) = -e*log2(e) - (1-e)*log2(1-e)，约定 0*log2(0) = 0"""
    if not 0.0 <= e <= 1.0:
        raise DomainError(f"概率超出 [0,1]: {e}")
    return float((special.entr(e) + special.entr(1.0 - e)) / _LN2)


def normal_cdf(z):
    """标准正态分布函数 Phi(z)"""
    return special.ndtr(z)


def gaussian_outside_prob(d: GaussianDist, center: float, halfwidth: float) -> float:
    """Pr[|X - center| > halfwidth]，X ~ d"""
    if halfwidth < 0:
        raise DomainError(f"半宽必须非负: {halfwidth}")
    sigma = d.sigma
    lower = (center - halfwidth - d.mean) / sigma
    upper = (center + halfwidth - d.mean) / sigma
    # 两侧都用 ndtr 的尾部形式，避免 1 - Phi 的抵消
    return float(special.ndtr(lower) + special.ndtr(-upper))


def gaussian_inside_prob(d: GaussianDist, center: float, halfwidth: float) -> float:
    """Pr[|X - center| <= halfwidth]"""
    if halfwidth < 0:
        raise DomainError(f"半宽必须非负: {halfwidth}")
    sigma = d.sigma
    lower = (center - halfwidth - d.mean) / sigma
    upper = (center + halfwidth - d.mean) / sigma
    if lower > 0:
        return float(special.ndtr(-lower) - special.ndtr(-upper))
    return float(special.ndtr(upper) - special.ndtr(lower))


def inverse_normal_cdf(q: float) -> float:
    """Phi^{-1}(q)，q 必须在开区间 (0,1)"""
    if not 0.0 < q < 1.0:
        raise DomainError(f"分位数必须在 (0,1) 内: {q}")
    return float(special.ndtri(q))


def loss_db_to_transmittance(db: float) -> float:
    """T = 10^(-dB/10)"""
    if db < 0:
        raise DomainError(f"损耗 dB 必须非负: {db}")
    return float(10.0 ** (-db / 10.0))


def squeezing_db(sigma_tilde_sq: float) -> float:
    """压缩量 dB = 10*log10(1/sigma_tilde^2)，sigma_tilde^2 以真空为 1"""
    if not sigma_tilde_sq > 0:
        raise DomainError(f"sigma_tilde^2 必须为正: {sigma_tilde_sq}")
    return float(10.0 * np.log10(1.0 / sigma_tilde_sq))


def variance_from_squeezing_db(db: float) -> float:
    """压缩 dB -> 被压缩分量的绝对方差（真空 = 0.5）"""
    return VACUUM_VARIANCE * 10.0 ** (-db / 10.0)
