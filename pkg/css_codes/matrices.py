"""
校验矩阵与嵌套码对
C1 = ker H1，C2 = ker H2，要求 C2 ⊂ C1（等价于 rowspace(H1) ⊂ rowspace(H2)）
"""
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2

logger = logging.getLogger(__name__)


class CodeError(ValueError):
    """码参数或向量长度不合法"""


@dataclass(frozen=True)
class ParityCheckMatrix:
    bits: np.ndarray = field(compare=False)
    rank: int = field(init=False, default=0)

    def __post_init__(self):
        bits = gf2.as_bits(self.bits)
        if bits.ndim != 2:
            raise CodeError(f"校验矩阵必须是二维: shape={bits.shape}")
        if bits.shape[0] > bits.shape[1]:
            raise CodeError(f"行数 {bits.shape[0]} 不能超过列数 {bits.shape[1]}")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "rank", gf2.rank(bits) if bits.size else 0)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def full_row_rank(self) -> bool:
        return self.rank == self.rows

    @property
    def dimension(self) -> int:
        """码 ker H 的维数"""
        return self.cols - self.rank

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> 'ParityCheckMatrix':
        return cls(np.array(rows, dtype=np.uint8))

    @classmethod
    def from_generator(cls, generator) -> 'ParityCheckMatrix':
        """由生成矩阵 G 得到校验矩阵 H（H G^T = 0）"""
        g = gf2.as_bits(generator)
        return cls(gf2.nullspace(g))

    def generator(self) -> np.ndarray:
        """码 ker H 的一组基"""
        return gf2.nullspace(self.bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, ParityCheckMatrix) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.bits.shape, self.bits.tobytes()))


@dataclass(frozen=True)
class NestedCodePair:
    H1: ParityCheckMatrix
    H2: ParityCheckMatrix
    name: str = "custom"

    def __post_init__(self):
        if self.H1.cols != self.H2.cols:
            raise CodeError(f"码长不一致: {self.H1.cols} vs {self.H2.cols}")

    @property
    def length(self) -> int:
        return self.H1.cols

    @property
    def secret_bits(self) -> int:
        return self.H1.dimension - self.H2.dimension

    def secret_rows(self) -> np.ndarray:
        """H2 中补全 rowspace(H1) 的那些行，个数为 k1 - k2"""
        return gf2.rowspace_complement(self.H1.bits, self.H2.bits)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "n": self.length,
            "k1": self.H1.dimension,
            "k2": self.H2.dimension,
            "secret_bits": self.secret_bits,
        }


def verify_nested(p: NestedCodePair) -> bool:
    """H1 G2^T = 0，G2 为 C2 的基"""
    g2 = p.H2.generator()
    if g2.shape[0] == 0:
        return True
    return not np.any(gf2.matmul(p.H1.bits, g2.T))
