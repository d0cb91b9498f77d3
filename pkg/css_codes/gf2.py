"""
GF(2) 线性代数：行简化、秩、零空间、行空间补
矩阵统一用 uint8 的 0/1 数组
"""
from typing import Tuple, List

import numpy as np


def as_bits(a) -> np.ndarray:
    return np.asarray(a, dtype=np.uint8) & 1


def matmul(a, b) -> np.ndarray:
    """模 2 矩阵乘"""
    return (as_bits(a).astype(np.int64) @ as_bits(b).astype(np.int64) % 2).astype(np.uint8)


def rref(a) -> Tuple[np.ndarray, List[int]]:
    """行最简形与主元列"""
    m = as_bits(a).copy()
    if m.ndim != 2:
        m = m.reshape(1, -1) if m.size else np.zeros((0, 0), dtype=np.uint8)
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        m[others] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a) -> int:
    return len(rref(a)[1])


def nullspace(a) -> np.ndarray:
    """{v : a v = 0} 的一组基（按行排列）"""
    m, pivots = rref(a)
    cols = m.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            basis[i, p] = m[row, f]
    return basis


def in_rowspace(v, a) -> bool:
    a = as_bits(a)
    if a.size == 0:
        return not np.any(as_bits(v))
    return rank(np.vstack([a, as_bits(v)])) == rank(a)


def rowspace_complement(base, extended) -> np.ndarray:
    """从 extended 中贪心挑出若干行，使其与 base 一起张成 rowspace(base) + rowspace(extended)"""
    base = as_bits(base)
    extended = as_bits(extended)
    current = base.copy() if base.size else np.zeros((0, extended.shape[1]), dtype=np.uint8)
    current_rank = rank(current) if current.size else 0
    picked = []
    for row in extended:
        candidate = np.vstack([current, row])
        candidate_rank = rank(candidate)
        if candidate_rank > current_rank:
            picked.append(row)
            current, current_rank = candidate, candidate_rank
    if not picked:
        return np.zeros((0, extended.shape[1]), dtype=np.uint8)
    return np.array(picked, dtype=np.uint8)
