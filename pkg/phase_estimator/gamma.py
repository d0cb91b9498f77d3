"""
Gamma 矩阵：Gamma[k, (l,n)] = conj(c_k^l) * c_k^n，(l,n) 按行主序展开
"""
import logging
from dataclasses import dataclass, field
from typing import Sequence, TYPE_CHECKING

import numpy as np
from scipy import linalg

from core_math.fock import coherent_fock

if TYPE_CHECKING:
    from .probes import ProbeSet

logger = logging.getLogger(__name__)


def gamma_entries(alphas: Sequence[complex], cutoff: int) -> np.ndarray:
    """K x (cutoff+1)^2 的系数矩阵"""
    rows = []
    for alpha in alphas:
        c = coherent_fock(alpha, cutoff).as_array()
        rows.append(np.outer(np.conj(c), c).ravel())
    return np.array(rows, dtype=complex)


def condition_number(entries: np.ndarray) -> float:
    """2-范数条件数；奇异时为 inf"""
    if entries.shape[0] != entries.shape[1]:
        return float("inf")
    value = float(np.linalg.cond(entries))
    return value if np.isfinite(value) else float("inf")


@dataclass(frozen=True)
class GammaMatrix:
    entries: np.ndarray = field(compare=False)
    cutoff: int
    deficits: np.ndarray = field(compare=False)
    condition_number: float
    inverse: np.ndarray = field(default=None, compare=False, repr=False)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def accepted(self) -> bool:
        return self.inverse is not None and np.isfinite(self.condition_number)

    @property
    def inverse_norm(self) -> float:
        return float(np.linalg.norm(self.inverse, 2))


def build_gamma(p: 'ProbeSet') -> GammaMatrix:
    """由探针集构造 Gamma，可逆时顺带缓存逆矩阵"""
    entries = gamma_entries(p.alphas, p.cutoff)
    deficits = np.array([coherent_fock(a, p.cutoff).deficit for a in p.alphas])
    cond = condition_number(entries)

    inverse = None
    if np.isfinite(cond):
        try:
            inverse = linalg.inv(entries)
        except linalg.LinAlgError as e:
            logger.error(f"Gamma 求逆失败: {e}")
            cond = float("inf")

    logger.debug(f"Gamma 已构造: K={entries.shape[0]}, cond={cond:.3e}")
    return GammaMatrix(entries=entries, cutoff=p.cutoff, deficits=deficits,
                       condition_number=cond, inverse=inverse)
