"""
零差测量：结果采样 + 是/否效应概率
"""
import logging
from dataclasses import dataclass

import numpy as np

from core_math.conventions import GaussianDist, DomainError
from core_math.special import gaussian_outside_prob
from .models import GaussianModState

logger = logging.getLogger(__name__)

QUADRATURES = ("x", "p")


@dataclass(frozen=True)
class HomodyneOutcome:
    quadrature: str
    value: float


def _check_quadrature(q: str):
    if q not in QUADRATURES:
        raise DomainError(f"未知正交分量: {q}")


def homodyne_sample(s: GaussianModState, q: str, rng: np.random.Generator) -> HomodyneOutcome:
    """value ~ N(mean_q, var_q)，先抽标准正态再缩放（同一种子下结果随方差单调）"""
    _check_quadrature(q)
    value = s.mean(q) + np.sqrt(s.variance(q)) * rng.standard_normal()
    return HomodyneOutcome(quadrature=q, value=float(value))


def homodyne_samples(means: np.ndarray, variances: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """批量采样：means/variances 为同形数组"""
    means = np.asarray(means, dtype=float)
    return means + np.sqrt(np.asarray(variances, dtype=float)) * rng.standard_normal(means.shape)


def effect_outside_prob(s: GaussianModState, q: str, center: float, halfwidth: float) -> float:
    """测量结果落在 [center-halfwidth, center+halfwidth] 之外的精确概率"""
    _check_quadrature(q)
    return gaussian_outside_prob(GaussianDist(s.mean(q), s.variance(q)), center, halfwidth)


def outside_indicators(values: np.ndarray, centers: np.ndarray, halfwidth: float) -> np.ndarray:
    """是/否结果：|value - center| > halfwidth 记为 1"""
    return (np.abs(np.asarray(values) - np.asarray(centers)) > halfwidth).astype(np.int64)
