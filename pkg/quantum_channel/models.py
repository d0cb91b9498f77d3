"""
信道模型：无损 / 分束器衰减 / 带额外噪声的高斯信道 / 截获重发攻击
状态以正交分量均值与方差描述（真空方差 0.5）
"""
import logging
from dataclasses import dataclass, replace
from typing import Dict, Any, Optional, Tuple

import numpy as np

from core_math.conventions import VACUUM_VARIANCE, DomainError
from core_math.special import loss_db_to_transmittance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussianModState:
    """单模高斯态：(mean_x, mean_p) 与 (var_x, var_p)"""
    mean_x: float
    mean_p: float
    var_x: float = VACUUM_VARIANCE
    var_p: float = VACUUM_VARIANCE

    def __post_init__(self):
        if self.var_x <= 0 or self.var_p <= 0:
            raise DomainError(f"方差必须为正: ({self.var_x}, {self.var_p})")

    @classmethod
    def coherent(cls, x: float, p: float) -> 'GaussianModState':
        return cls(mean_x=x, mean_p=p)

    @classmethod
    def from_alpha(cls, alpha: complex) -> 'GaussianModState':
        """相干振幅 alpha -> (sqrt2 Re alpha, sqrt2 Im alpha)"""
        alpha = complex(alpha)
        return cls.coherent(np.sqrt(2.0) * alpha.real, np.sqrt(2.0) * alpha.imag)

    @classmethod
    def p_squeezed(cls, x: float, p: float, var_p: float) -> 'GaussianModState':
        """p 分量压缩的最小不确定度态"""
        return cls(mean_x=x, mean_p=p, var_x=VACUUM_VARIANCE ** 2 / var_p, var_p=var_p)

    def mean(self, quadrature: str) -> float:
        return self.mean_x if quadrature == "x" else self.mean_p

    def variance(self, quadrature: str) -> float:
        return self.var_x if quadrature == "x" else self.var_p


class ChannelModel:
    """信道基类：对一批态的均值/方差数组作用"""

    name = "channel"
    stochastic = False

    def apply(self, means: np.ndarray, variances: np.ndarray,
              rng: Optional[np.random.Generator] = None) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def describe(self) -> Dict[str, Any]:
        return {"type": self.name}


@dataclass(frozen=True)
class Lossless(ChannelModel):
    name = "lossless"

    def apply(self, means, variances, rng=None):
        return np.array(means, dtype=float), np.array(variances, dtype=float)


@dataclass(frozen=True)
class BeamSplitter(ChannelModel):
    """分束器：第二输入口为真空，均值乘 sqrt(T)，方差 T*var + (1-T)*0.5"""
    transmittance: float
    name = "beamsplitter"

    def __post_init__(self):
        if not 0.0 < self.transmittance <= 1.0:
            raise DomainError(f"透射率必须在 (0,1]: {self.transmittance}")

    def apply(self, means, variances, rng=None):
        t = self.transmittance
        means = np.sqrt(t) * np.asarray(means, dtype=float)
        variances = t * np.asarray(variances, dtype=float) + (1.0 - t) * VACUUM_VARIANCE
        return means, variances

    def describe(self):
        return {"type": self.name, "transmittance": self.transmittance}


@dataclass(frozen=True)
class NoisyGaussian(ChannelModel):
    """衰减后再加额外噪声 (excess_x, excess_p)"""
    transmittance: float = 1.0
    excess_x: float = 0.0
    excess_p: float = 0.0
    name = "noisy"

    def __post_init__(self):
        if not 0.0 < self.transmittance <= 1.0:
            raise DomainError(f"透射率必须在 (0,1]: {self.transmittance}")
        if self.excess_x < 0 or self.excess_p < 0:
            raise DomainError(f"额外噪声必须非负: ({self.excess_x}, {self.excess_p})")

    def apply(self, means, variances, rng=None):
        means, variances = BeamSplitter(self.transmittance).apply(means, variances)
        return means, variances + np.array([self.excess_x, self.excess_p])

    def describe(self):
        return {"type": self.name, "transmittance": self.transmittance,
                "excess_x": self.excess_x, "excess_p": self.excess_p}


@dataclass(frozen=True)
class InterceptResend(ChannelModel):
    """Eve 随机选一个分量做零差测量，再以测量值为中心重新制备相干态（另一分量置 0）"""
    basis_strategy: str = "random"
    name = "intercept-resend"
    stochastic = True

    def __post_init__(self):
        if self.basis_strategy not in ("random", "x", "p"):
            raise DomainError(f"未知测量策略: {self.basis_strategy}")

    def apply(self, means, variances, rng=None):
        if rng is None:
            raise DomainError("截获重发信道需要随机数发生器")
        means = np.asarray(means, dtype=float)
        variances = np.asarray(variances, dtype=float)
        count = means.shape[0]

        if self.basis_strategy == "random":
            basis = rng.integers(0, 2, size=count)
        else:
            basis = np.full(count, 0 if self.basis_strategy == "x" else 1)

        rows = np.arange(count)
        outcome = means[rows, basis] + np.sqrt(variances[rows, basis]) * rng.standard_normal(count)

        resent = np.zeros_like(means)
        resent[rows, basis] = outcome
        return resent, np.full_like(variances, VACUUM_VARIANCE)

    def describe(self):
        return {"type": self.name, "basis_strategy": self.basis_strategy}


def propagate(s: GaussianModState, c: ChannelModel,
              rng: Optional[np.random.Generator] = None) -> GaussianModState:
    """单个态过信道"""
    means, variances = c.apply(
        np.array([[s.mean_x, s.mean_p]]), np.array([[s.var_x, s.var_p]]), rng
    )
    return replace(
        s,
        mean_x=float(means[0, 0]), mean_p=float(means[0, 1]),
        var_x=float(variances[0, 0]), var_p=float(variances[0, 1]),
    )


def _transmittance_from(config: Dict[str, Any]) -> float:
    if "transmittance" in config:
        return float(config["transmittance"])
    return loss_db_to_transmittance(float(config.get("loss_db", 0.0)))


def parse_channel(config: Dict[str, Any]) -> ChannelModel:
    """从会话 JSON 解析信道，例如 {"type": "beamsplitter", "loss_db": 0.7}"""
    channel_type = str(config.get("type", "lossless")).lower()

    if channel_type == "lossless":
        return Lossless()
    if channel_type in ("beamsplitter", "beam-splitter", "loss"):
        return BeamSplitter(_transmittance_from(config))
    if channel_type in ("noisy", "noisy-gaussian"):
        return NoisyGaussian(
            transmittance=_transmittance_from(config),
            excess_x=float(config.get("excess_x", config.get("excess", 0.0))),
            excess_p=float(config.get("excess_p", config.get("excess", 0.0))),
        )
    if channel_type in ("intercept-resend", "intercept_resend"):
        return InterceptResend(basis_strategy=config.get("basis_strategy", "random"))

    logger.error(f"未知信道类型: {channel_type}")
    raise DomainError(f"未知信道类型: {channel_type}")
