"""
探针设计：(cutoff+1)^2 个小振幅相干态，要求每个探针的 Fock 亏损 < eps_max，
且 Gamma 的条件数 < cond_max

策略：交错的极坐标网格 + 小幅随机抖动，最多重试 max_rounds 轮，保留最好的一组
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Dict, Any

import numpy as np
from scipy import optimize, stats

from core_math.conventions import DomainError
from core_math.fock import coherent_fock
from .gamma import gamma_entries, condition_number

logger = logging.getLogger(__name__)

DEFAULT_EPS_MAX = 0.05
DEFAULT_COND_MAX = 1e8
DEFAULT_MAX_ROUNDS = 200
DEFAULT_JITTER = 0.15


class ProbeDesignError(RuntimeError):
    """达到最大轮数仍未找到合格的探针集"""

    def __init__(self, message: str, best_condition: float):
        super().__init__(message)
        self.best_condition = best_condition


@dataclass(frozen=True)
class ProbeSet:
    alphas: Tuple[complex, ...]
    copies_per_probe: int
    cutoff: int
    eps_max: float
    condition_number: float = field(default=float("nan"))

    @property
    def size(self) -> int:
        return len(self.alphas)

    def deficits(self) -> np.ndarray:
        return np.array([coherent_fock(a, self.cutoff).deficit for a in self.alphas])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alphas": [[a.real, a.imag] for a in self.alphas],
            "copies_per_probe": self.copies_per_probe,
            "cutoff": self.cutoff,
            "eps_max": self.eps_max,
            "condition_number": self.condition_number,
            "deficits": self.deficits().tolist(),
        }


def max_probe_radius(cutoff: int, eps_max: float, margin: float = 0.9) -> float:
    """|alpha| 上限：Poisson 尾 Pr[n > cutoff] = margin * eps_max"""
    target = margin * eps_max
    tail = lambda lam: stats.poisson.sf(cutoff, lam) - target
    mean = optimize.brentq(tail, 1e-12, cutoff + 50.0, xtol=1e-14)
    return float(np.sqrt(mean))


def probe_layout(cutoff: int, radius: float, rng: np.random.Generator,
                 jitter: float = DEFAULT_JITTER) -> np.ndarray:
    """(cutoff+1) 个圆环，每环 (cutoff+1) 个点，环间角度交错，再加抖动"""
    rings = cutoff + 1
    alphas = []
    for j in range(1, rings + 1):
        ring_radius = radius * j / rings
        for k in range(rings):
            angle = 2.0 * np.pi * (k + j / (rings + 1.0)) / rings
            r = ring_radius * (1.0 + jitter * rng.uniform(-1.0, 1.0))
            a = angle + jitter * rng.uniform(-np.pi, np.pi) / rings
            alphas.append(min(r, radius) * np.exp(1j * a))
    return np.array(alphas, dtype=complex)


def validate_probes(alphas: Sequence[complex], cutoff: int, eps_max: float, cond_max: float,
                    copies_per_probe: int = 1) -> ProbeSet:
    """校验给定振幅：数量、亏损、条件数"""
    alphas = tuple(complex(a) for a in alphas)
    expected = (cutoff + 1) ** 2
    if len(alphas) != expected:
        raise ProbeDesignError(f"探针数应为 {expected}，实际 {len(alphas)}", float("inf"))

    deficits = [coherent_fock(a, cutoff).deficit for a in alphas]
    if max(deficits) >= eps_max:
        raise ProbeDesignError(f"探针亏损 {max(deficits):.3g} 超过 eps_max={eps_max}", float("inf"))

    cond = condition_number(gamma_entries(alphas, cutoff))
    if not cond < cond_max:
        raise ProbeDesignError(f"Gamma 条件数 {cond:.3e} 超过上限 {cond_max:.1e}", cond)

    return ProbeSet(alphas=alphas, copies_per_probe=copies_per_probe, cutoff=cutoff,
                    eps_max=eps_max, condition_number=cond)


def design_probes(cutoff: int, eps_max: float = DEFAULT_EPS_MAX, cond_max: float = DEFAULT_COND_MAX,
                  rng: Optional[np.random.Generator] = None, copies_per_probe: int = 1,
                  max_rounds: int = DEFAULT_MAX_ROUNDS, jitter: float = DEFAULT_JITTER) -> ProbeSet:
    """随机抖动重试，返回第一组合格的探针"""
    if cutoff < 0:
        raise DomainError(f"截断必须非负: {cutoff}")
    if not 0.0 < eps_max < 0.1:
        raise DomainError(f"eps_max 必须在 (0, 0.1): {eps_max}")
    rng = rng or np.random.default_rng()

    radius = max_probe_radius(cutoff, eps_max)
    best_cond = float("inf")
    for round_index in range(max_rounds):
        alphas = probe_layout(cutoff, radius, rng, jitter)
        cond = condition_number(gamma_entries(alphas, cutoff))
        best_cond = min(best_cond, cond)
        if cond < cond_max:
            logger.info(f"✅ 探针设计完成: cutoff={cutoff}, K={len(alphas)}, cond={cond:.3e}, 轮数={round_index + 1}")
            return ProbeSet(alphas=tuple(complex(a) for a in alphas), copies_per_probe=copies_per_probe,
                            cutoff=cutoff, eps_max=eps_max, condition_number=cond)

    logger.error(f"❌ 探针设计失败: {max_rounds} 轮后最佳条件数 {best_cond:.3e}")
    raise ProbeDesignError(f"{max_rounds} 轮后仍未满足 cond < {cond_max:.1e}", best_cond)
