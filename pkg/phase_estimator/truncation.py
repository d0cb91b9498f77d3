"""
截断误差检验：|<psi|E|psi> - <psi_N|E|psi_N>| <= eps + 2 sqrt(eps)，0 <= E <= 1
随机效应 U diag(lambda) U^dagger，随机态的振幅按指数衰减以保证截断有意义
"""
import logging
from typing import Dict, Any, Optional, Tuple

import numpy as np
from scipy.stats import unitary_group

logger = logging.getLogger(__name__)


def random_effect(dim: int, rng: np.random.Generator) -> np.ndarray:
    """特征值在 [0,1] 的随机厄米算符"""
    u = unitary_group.rvs(dim, random_state=rng)
    eigenvalues = rng.uniform(0.0, 1.0, dim)
    return (u * eigenvalues) @ u.conj().T


def random_state(dim: int, rng: np.random.Generator, decay: float = 0.5) -> np.ndarray:
    """归一化的复向量，|psi_n| ~ exp(-decay * n)"""
    envelope = np.exp(-decay * np.arange(dim))
    psi = envelope * (rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
    return psi / np.linalg.norm(psi)


def truncation_gap(effect: np.ndarray, state: np.ndarray, cutoff: int) -> Tuple[float, float]:
    """返回 (|全空间期望 - 截断期望|, eps + 2 sqrt(eps))"""
    full = float(np.vdot(state, effect @ state).real)
    head = state[:cutoff + 1]
    truncated = float(np.vdot(head, effect[:cutoff + 1, :cutoff + 1] @ head).real)
    eps = max(1.0 - float(np.vdot(head, head).real), 0.0)
    return abs(full - truncated), eps + 2.0 * np.sqrt(eps)


def truncation_bound_check(trials: int = 100, dim: int = 40, cutoff: int = 3,
                           rng: Optional[np.random.Generator] = None) -> Dict[str, Any]:
    """随机抽取效应与态，统计是否有违反截断界的情形"""
    rng = rng or np.random.default_rng()
    violations = 0
    worst_ratio = 0.0
    for _ in range(trials):
        gap, bound = truncation_gap(random_effect(dim, rng), random_state(dim, rng), cutoff)
        if gap > bound + 1e-12:
            violations += 1
        if bound > 0:
            worst_ratio = max(worst_ratio, gap / bound)
    logger.info(f"📊 截断界检验: {trials} 次，违反 {violations} 次，最大 gap/bound={worst_ratio:.3f}")
    return {"trials": trials, "violations": violations, "worst_ratio": worst_ratio}
