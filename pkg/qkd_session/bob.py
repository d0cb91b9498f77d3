"""
Bob 端：零差测量、比特检验误码率、增益/噪声回归、探针统计 F(j,k)
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import stats

from core_math.conventions import DomainError
from quantum_channel.homodyne import outside_indicators
from .records import Role

logger = logging.getLogger(__name__)

CONFIDENCE_LEVEL = 0.95


@dataclass(frozen=True)
class BitErrorEstimate:
    e_b: float
    halfwidth: float
    samples: int


@dataclass(frozen=True)
class ChannelFit:
    """y = gain * x + n，n ~ N(0, noise_variance)"""
    gain: float
    noise_variance: float


def bob_measure(means: np.ndarray, variances: np.ndarray, roles: Sequence[Role],
                rng: np.random.Generator) -> np.ndarray:
    """
    按角色选正交分量测量：密钥/比特检验测 x，检验态/探针测 p
    每个振子先抽一个标准正态再缩放，同一种子下结果随方差单调
    """
    column = np.array([0 if r.quadrature == "x" else 1 for r in roles], dtype=np.int64)
    rows = np.arange(len(roles))
    z = rng.standard_normal(len(roles))
    return means[rows, column] + np.sqrt(variances[rows, column]) * z


def fit_channel(disclosed: np.ndarray, outcomes: np.ndarray) -> ChannelFit:
    """过原点最小二乘估计增益，残差方差估计噪声"""
    disclosed = np.asarray(disclosed, dtype=float)
    outcomes = np.asarray(outcomes, dtype=float)
    if disclosed.size < 2:
        raise DomainError("至少需要 2 个比特检验样本才能估计信道")
    energy = float(np.dot(disclosed, disclosed))
    if energy == 0.0:
        raise DomainError("公开值全为 0，无法估计增益")
    gain = float(np.dot(disclosed, outcomes) / energy)
    residual = outcomes - gain * disclosed
    noise_variance = float(np.dot(residual, residual) / (disclosed.size - 1))
    return ChannelFit(gain=gain, noise_variance=max(noise_variance, 1e-12))


def bit_check_indicators(disclosed: np.ndarray, outcomes: np.ndarray, gain: float,
                         halfwidth: float) -> np.ndarray:
    """|y - gain * x_j| > halfwidth 记为 1"""
    return outside_indicators(outcomes, gain * np.asarray(disclosed, dtype=float), halfwidth)


def estimate_bit_error(indicators: Sequence[int]) -> BitErrorEstimate:
    """e_b = 指示量均值，附 95% Wilson 区间半宽"""
    values = np.asarray(indicators, dtype=np.int64)
    if values.size == 0:
        raise DomainError("比特检验结果为空")
    errors = int(values.sum())
    interval = stats.binomtest(errors, values.size).proportion_ci(
        confidence_level=CONFIDENCE_LEVEL, method="wilson"
    )
    return BitErrorEstimate(
        e_b=errors / values.size,
        halfwidth=float(interval.high - interval.low) / 2.0,
        samples=int(values.size),
    )


def collect_F_statistics(outcomes: np.ndarray, probe_index: np.ndarray, probe_count: int,
                         centers: Sequence[float], halfwidth: float) -> Tuple[np.ndarray, List[List[np.ndarray]]]:
    """
    F(j,k)：第 k 个探针的 M 次 p 测量中，落在 centers[j] +- halfwidth 之外的比例
    同一次测量结果对所有中心 j 都给出是/否结论
    返回 (F, indicators[j][k])
    """
    outcomes = np.asarray(outcomes, dtype=float)
    probe_index = np.asarray(probe_index, dtype=np.int64)
    F = np.empty((len(centers), probe_count))
    indicators: List[List[np.ndarray]] = []
    for j, center in enumerate(centers):
        row = []
        for k in range(probe_count):
            values = outcomes[probe_index == k]
            if values.size == 0:
                raise DomainError(f"探针 {k} 没有测量结果")
            hits = outside_indicators(values, np.full(values.size, center), halfwidth)
            F[j, k] = hits.mean()
            row.append(hits)
        indicators.append(row)
    return F, indicators
