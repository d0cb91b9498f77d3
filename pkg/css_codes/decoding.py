"""
伴随式译码与隐私放大
陪集首表：按重量递增、同重量按 itertools.combinations 的字典序枚举，先到先得
"""
import itertools
import logging
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from . import gf2
from .matrices import ParityCheckMatrix, CodeError

logger = logging.getLogger(__name__)

MAX_TABLE_LENGTH = 24


def _check_length(H: ParityCheckMatrix, v: np.ndarray):
    if v.ndim != 1 or v.shape[0] != H.cols:
        raise CodeError(f"向量长度 {v.shape} 与码长 {H.cols} 不符")


def syndrome(H: ParityCheckMatrix, v) -> np.ndarray:
    """H v (mod 2)"""
    v = gf2.as_bits(v)
    _check_length(H, v)
    return gf2.matmul(H.bits, v)


class CosetTable:
    """伴随式 -> 最小重量陪集首"""

    def __init__(self, H: ParityCheckMatrix):
        if H.cols > MAX_TABLE_LENGTH:
            raise CodeError(f"码长 {H.cols} 超过穷举上限 {MAX_TABLE_LENGTH}")
        self.H = H
        self.leaders: Dict[bytes, np.ndarray] = {}
        target = 2 ** H.rank
        n = H.cols

        for weight in range(n + 1):
            for positions in itertools.combinations(range(n), weight):
                e = np.zeros(n, dtype=np.uint8)
                e[list(positions)] = 1
                key = syndrome(H, e).tobytes()
                if key not in self.leaders:
                    self.leaders[key] = e
            if len(self.leaders) >= target:
                break

        logger.debug(f"陪集首表完成: n={n}, 伴随式数={len(self.leaders)}")

    def leader(self, s) -> np.ndarray:
        key = gf2.as_bits(s).tobytes()
        if key not in self.leaders:
            raise CodeError("伴随式不在 H 的列空间内")
        return self.leaders[key]

    def max_leader_weight(self) -> int:
        return max(int(e.sum()) for e in self.leaders.values())


@lru_cache(maxsize=16)
def coset_table(H: ParityCheckMatrix) -> CosetTable:
    return CosetTable(H)


def syndrome_decode(v, xi, H1: ParityCheckMatrix) -> np.ndarray:
    """把 v 纠正到满足 H1 v'' = xi 的最近向量：v + leader(H1 v + xi)"""
    v = gf2.as_bits(v)
    _check_length(H1, v)
    xi = gf2.as_bits(xi)
    if xi.shape != (H1.rows,):
        raise CodeError(f"伴随式长度 {xi.shape} 与行数 {H1.rows} 不符")
    return v ^ coset_table(H1).leader(syndrome(H1, v) ^ xi)


def privacy_amplify(H2: ParityCheckMatrix, k) -> np.ndarray:
    """H2 k (mod 2)"""
    return syndrome(H2, k)


def amplify_rows(rows: np.ndarray, k) -> np.ndarray:
    """只取补全 rowspace(H1) 的那几行，得到真正保密的比特"""
    k = gf2.as_bits(k)
    rows = gf2.as_bits(rows)
    if rows.size == 0:
        return np.zeros(0, dtype=np.uint8)
    if rows.shape[1] != k.shape[0]:
        raise CodeError(f"向量长度 {k.shape[0]} 与码长 {rows.shape[1]} 不符")
    return gf2.matmul(rows, k)


def block_split(bits, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """切成长度 n 的整块，返回 (blocks, 余下的比特)"""
    bits = gf2.as_bits(bits)
    whole = (bits.shape[0] // n) * n
    return bits[:whole].reshape(-1, n), bits[whole:]
