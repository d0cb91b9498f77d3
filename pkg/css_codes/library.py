"""
内置码族：重复码 / Hamming[7,4] / BCH[15,7]，以及对应的嵌套子码
"""
import logging
import re
from typing import List

import numpy as np

from . import gf2
from .matrices import ParityCheckMatrix, NestedCodePair, CodeError, verify_nested

logger = logging.getLogger(__name__)

# g(x) = 1 + x^4 + x^6 + x^7 + x^8，系数从低次到高次
BCH_15_7_GENERATOR = (1, 0, 0, 0, 1, 0, 1, 1, 1)

SHIPPED_CODES = ("hamming7", "bch15", "repetition<n>")


def repetition_code(n: int) -> ParityCheckMatrix:
    """[n,1] 重复码：相邻比特相等"""
    if n < 2:
        raise CodeError(f"重复码长度至少为 2: {n}")
    bits = np.zeros((n - 1, n), dtype=np.uint8)
    for i in range(n - 1):
        bits[i, i] = bits[i, i + 1] = 1
    return ParityCheckMatrix(bits)


def hamming_7_4() -> ParityCheckMatrix:
    """第 j 列为 j 的二进制（j=1..7），第一行为最高位"""
    columns = [[(j >> shift) & 1 for shift in (2, 1, 0)] for j in range(1, 8)]
    return ParityCheckMatrix(np.array(columns, dtype=np.uint8).T)


def cyclic_generator_matrix(generator: tuple, n: int) -> np.ndarray:
    """循环码生成矩阵：g(x) 的 k 个移位"""
    degree = len(generator) - 1
    k = n - degree
    rows = np.zeros((k, n), dtype=np.uint8)
    for i in range(k):
        rows[i, i:i + degree + 1] = generator
    return rows


def bch_15_7() -> ParityCheckMatrix:
    return ParityCheckMatrix.from_generator(cyclic_generator_matrix(BCH_15_7_GENERATOR, 15))


def simplex_pair() -> NestedCodePair:
    """Hamming[7,4] ⊃ 单纯形码 [7,3]（即 Hamming 的对偶），每块 1 个保密比特"""
    H1 = hamming_7_4()
    H2 = ParityCheckMatrix(H1.generator())
    return NestedCodePair(H1=H1, H2=H2, name="hamming7")


def even_weight_subcode_pair(H1: ParityCheckMatrix, name: str) -> NestedCodePair:
    """C2 = C1 ∩ 偶重量码：H2 = H1 加一行全 1"""
    H2 = ParityCheckMatrix(np.vstack([H1.bits, np.ones((1, H1.cols), dtype=np.uint8)]))
    return NestedCodePair(H1=H1, H2=H2, name=name)


def repetition_pair(n: int) -> NestedCodePair:
    """[n,1] ⊃ {0}：H2 = 单位阵"""
    return NestedCodePair(H1=repetition_code(n), H2=ParityCheckMatrix(np.eye(n, dtype=np.uint8)),
                          name=f"repetition{n}")


def nested_pair(name: str) -> NestedCodePair:
    """按名字取内置码对"""
    key = name.strip().lower()
    if key in ("hamming7", "hamming", "hamming_7_4"):
        pair = simplex_pair()
    elif key in ("bch15", "bch_15_7"):
        pair = even_weight_subcode_pair(bch_15_7(), "bch15")
    else:
        match = re.fullmatch(r"repetition(\d+)", key)
        if not match:
            raise CodeError(f"未知码: {name}，可选 {', '.join(SHIPPED_CODES)}")
        pair = repetition_pair(int(match.group(1)))

    if not verify_nested(pair):
        raise CodeError(f"{name} 不满足 C2 ⊂ C1")
    return pair


def minimum_distance(H: ParityCheckMatrix) -> int:
    """穷举码字求最小距离，只用于小码"""
    basis = H.generator()
    k = basis.shape[0]
    if k == 0:
        return H.cols + 1
    if k > 16:
        raise CodeError(f"码维数 {k} 太大，无法穷举")
    best = H.cols
    for mask in range(1, 2 ** k):
        coeffs = np.array([(mask >> i) & 1 for i in range(k)], dtype=np.uint8)
        weight = int(gf2.matmul(coeffs, basis).sum())
        best = min(best, weight)
    return best


def correction_radius(H: ParityCheckMatrix) -> int:
    return (minimum_distance(H) - 1) // 2


def list_codes() -> List[dict]:
    return [nested_pair(name).describe() for name in ("hamming7", "bch15", "repetition3")]
