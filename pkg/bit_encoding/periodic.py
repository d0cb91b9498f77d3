"""
周期分箱编码：x = (S + sbar) * spacing
比特是 S 的奇偶性；Bob 减去公开的 sbar*spacing 后取最近的整数倍
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core_math.conventions import DomainError

logger = logging.getLogger(__name__)

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class PeriodicBinning:
    """整数格点的间距（一个分量取 sqrt(pi)*alpha，共轭分量取 sqrt(pi)/alpha）"""
    spacing: float = SQRT_PI

    def __post_init__(self):
        if not self.spacing > 0:
            raise DomainError(f"格点间距必须为正: {self.spacing}")

    @property
    def halfwidth(self) -> float:
        return 0.5 * self.spacing


def spacings_for_alpha(alpha: float) -> Tuple[float, float]:
    """
    返回 (spacing_x, spacing_p) = (sqrt(pi)/alpha, sqrt(pi)*alpha)
    对应检验效应的半宽 sqrt(pi)/(2 alpha) 与 sqrt(pi)*alpha/2
    """
    if not alpha > 0:
        raise DomainError(f"alpha 必须为正: {alpha}")
    return SQRT_PI / alpha, SQRT_PI * alpha


def split_periodic(x: float, b: PeriodicBinning) -> Tuple[int, float]:
    """x -> (S, sbar)，sbar 取 [0,1)，负数也按 floor 约定"""
    q = x / b.spacing
    s = math.floor(q)
    sbar = q - s
    if sbar >= 1.0:
        s += 1
        sbar = 0.0
    return int(s), float(sbar)


def bit_from_integer(s: int) -> int:
    """S 的奇偶性（偶数为 0）"""
    return int(s) % 2


def decode_periodic(x_received: float, sbar: float, b: PeriodicBinning) -> int:
    """round((x' - sbar*spacing)/spacing) 的奇偶性，恰好居中时向偶数取整"""
    if not 0.0 <= sbar < 1.0:
        raise DomainError(f"sbar 必须在 [0,1) 内: {sbar}")
    k = np.rint((x_received - sbar * b.spacing) / b.spacing)
    return bit_from_integer(int(k))


def decode_periodic_batch(x_received: np.ndarray, sbar: np.ndarray, b: PeriodicBinning) -> np.ndarray:
    """decode_periodic 的向量版本"""
    k = np.rint((np.asarray(x_received) - np.asarray(sbar) * b.spacing) / b.spacing).astype(np.int64)
    return np.mod(k, 2)
