"""
相位误差估计：由探针统计 F 反解截断效应矩阵元 <l|E|n>，条件检验，估计 phi

误差带（全部显式给出，不靠经验常数）：
  target_band = eps_t + 2 sqrt(eps_t)                  目标态截断
  probe_band  = sum_k |w_k| (eps_k + 2 sqrt(eps_k))    探针截断，w = q Gamma^{-1}
  stat_sigma  = sqrt(sum_k |w_k|^2 F_k (1 - F_k) / M)  有限样本
其中 q_(l,n) = conj(psi_l) psi_n
"""
import logging
from dataclasses import dataclass, field, asdict
from typing import Sequence, Tuple, Dict, Any

import numpy as np
from scipy import linalg, stats

from core_math.conventions import FockVector, DomainError
from .gamma import GammaMatrix

logger = logging.getLogger(__name__)

DEFAULT_RATIO_MIN = 10.0


class SingularGammaError(RuntimeError):
    """Gamma 不可逆"""


@dataclass(frozen=True)
class EffectEstimate:
    matrix: np.ndarray = field(compare=False)
    hermiticity_residual: float
    spectrum_range: Tuple[float, float]

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "matrix_real": self.matrix.real.tolist(),
            "matrix_imag": self.matrix.imag.tolist(),
            "hermiticity_residual": self.hermiticity_residual,
            "spectrum_range": list(self.spectrum_range),
        }


@dataclass(frozen=True)
class PhiEstimate:
    value: float
    raw: float
    truncation_band: float


@dataclass(frozen=True)
class EstimateBands:
    target_band: float
    probe_band: float
    stat_sigma: float

    def total(self, n_sigma: float = 3.0) -> float:
        return self.target_band + self.probe_band + n_sigma * self.stat_sigma

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["total_3sigma"] = self.total()
        return data


def _check_row(F_row: Sequence[float], g: GammaMatrix) -> np.ndarray:
    F = np.asarray(F_row, dtype=float)
    if F.shape != (g.size,):
        raise DomainError(f"F 长度应为 {g.size}，实际 {F.shape}")
    if np.any(F < 0) or np.any(F > 1):
        raise DomainError("F 的元素必须在 [0,1]")
    return F


def invert_for_effect(F_row: Sequence[float], g: GammaMatrix) -> EffectEstimate:
    """带主元的 LU 求解 Gamma vec(E) = F，保留厄米残差而不强行对称化"""
    F = _check_row(F_row, g)
    if not g.accepted:
        logger.error(f"Gamma 不可逆 (cond={g.condition_number})")
        raise SingularGammaError(f"Gamma 不可逆 (cond={g.condition_number})")
    try:
        vec = linalg.lu_solve(linalg.lu_factor(g.entries), F.astype(complex))
    except (linalg.LinAlgError, ValueError) as e:
        logger.error(f"Gamma 求解失败: {e}")
        raise SingularGammaError(str(e)) from e

    dim = g.cutoff + 1
    matrix = vec.reshape(dim, dim)
    residual = float(np.linalg.norm(matrix - matrix.conj().T))
    eigenvalues = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))
    return EffectEstimate(matrix=matrix, hermiticity_residual=residual,
                          spectrum_range=(float(eigenvalues.min()), float(eigenvalues.max())))


def conditioning_ok(g: GammaMatrix, eps: float, F_row: Sequence[float],
                    ratio_min: float = DEFAULT_RATIO_MIN) -> bool:
    """||Gamma^{-1}|| (eps + 2 sqrt(eps)) sqrt(K) <= ||Gamma^{-1} F|| / ratio_min"""
    if eps < 0:
        raise DomainError(f"eps 必须非负: {eps}")
    F = _check_row(F_row, g)
    if not g.accepted:
        return False
    signal = float(np.linalg.norm(g.inverse @ F))
    if signal == 0.0:
        return False
    noise = g.inverse_norm * (eps + 2.0 * np.sqrt(eps)) * np.sqrt(g.size)
    return noise <= signal / ratio_min


def phi_estimate(e: EffectEstimate, target: FockVector) -> PhiEstimate:
    """Re <psi_N|E|psi_N>，截到 [0,1]，附带目标态截断误差带"""
    if target.cutoff != e.dimension - 1:
        raise DomainError(f"目标截断 {target.cutoff} 与效应维数 {e.dimension} 不符")
    psi = target.as_array()
    raw = float(np.vdot(psi, e.matrix @ psi).real)
    return PhiEstimate(value=float(np.clip(raw, 0.0, 1.0)), raw=raw, truncation_band=target.truncation_band)


def target_weights(target: FockVector, g: GammaMatrix) -> np.ndarray:
    """w = q Gamma^{-1}，使得 phi_N = w . F"""
    psi = target.as_array()
    q = np.outer(np.conj(psi), psi).ravel()
    return q @ g.inverse


def estimate_uncertainty(target: FockVector, g: GammaMatrix, F_row: Sequence[float],
                         copies: int) -> EstimateBands:
    F = _check_row(F_row, g)
    if copies < 1:
        raise DomainError(f"每个探针至少 1 份: {copies}")
    w = target_weights(target, g)
    eps = np.maximum(g.deficits, 0.0)
    probe_band = float(np.sum(np.abs(w) * (eps + 2.0 * np.sqrt(eps))))
    stat_sigma = float(np.sqrt(np.sum(np.abs(w) ** 2 * F * (1.0 - F)) / copies))
    return EstimateBands(target_band=target.truncation_band, probe_band=probe_band, stat_sigma=stat_sigma)


def aggregate_phase_error(phis: Sequence[float]) -> float:
    """Phi = 各 phi(j) 的算术平均"""
    if len(phis) == 0:
        raise DomainError("phi 列表为空")
    values = np.asarray(phis, dtype=float)
    if np.any(values < 0) or np.any(values > 1):
        raise DomainError("phi 必须在 [0,1]")
    return float(np.mean(values))


def homogeneity_pvalue(indicators: Sequence[int], blocks: int = 4) -> float:
    """
    把同一 (探针, 中心) 的是/否结果按位置分块，做 2 x blocks 列联表卡方检验
    i.i.d. 信道下 p 值近似均匀；全为同一结果时返回 1
    """
    values = np.asarray(indicators, dtype=np.int64)
    if values.size < blocks:
        return 1.0
    chunks = np.array_split(values, blocks)
    yes = np.array([c.sum() for c in chunks])
    no = np.array([c.size - c.sum() for c in chunks])
    if yes.sum() == 0 or no.sum() == 0:
        return 1.0
    _, pvalue, _, _ = stats.chi2_contingency(np.vstack([yes, no]))
    return float(pvalue)
