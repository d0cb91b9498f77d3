"""
单位约定与基础数据类型
所有正交分量方差都以真空噪声为单位：[x, p] = i  =>  真空方差 = 1/2
"""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

# 整个会话内不可变
VACUUM_VARIANCE = 0.5

# 归一化容差
NORM_TOLERANCE = 1e-12


class DomainError(ValueError):
    """参数超出定义域"""


@dataclass(frozen=True)
class GaussianDist:
    """一维高斯分布（均值 + 方差）"""
    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise DomainError(f"方差必须为正: {self.variance}")

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.variance))


@dataclass(frozen=True)
class FockVector:
    """截断的 Fock 基振幅 |0>..|cutoff>，附带截断亏损 deficit = 1 - sum|amps|^2"""
    amps: Tuple[complex, ...]
    cutoff: int
    deficit: float
    truncation_warning: bool = field(default=False)

    def __post_init__(self):
        if len(self.amps) != self.cutoff + 1:
            raise DomainError(f"振幅个数 {len(self.amps)} 与截断 {self.cutoff} 不符")
        if self.deficit < -NORM_TOLERANCE:
            raise DomainError(f"截断亏损为负: {self.deficit}")

    @classmethod
    def from_array(cls, amps: np.ndarray) -> 'FockVector':
        amps = np.asarray(amps, dtype=complex)
        norm = float(np.sum(np.abs(amps) ** 2))
        deficit = 1.0 - norm
        return cls(
            amps=tuple(complex(a) for a in amps),
            cutoff=len(amps) - 1,
            deficit=deficit,
            truncation_warning=deficit > 0.5,
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.amps, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.as_array()) ** 2))

    @property
    def truncation_band(self) -> float:
        """截断误差带 eps + 2*sqrt(eps)"""
        eps = max(self.deficit, 0.0)
        return eps + 2.0 * np.sqrt(eps)
