"""
Alice 端：制备振子、随机置换、源不可区分性检查
振子顺序（置换前）：[密钥 N][比特检验 mu][相位检验 nu 或 K*M 个探针]
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core_math.conventions import VACUUM_VARIANCE, DomainError
from core_math.special import variance_from_squeezing_db
from phase_estimator.probes import ProbeSet, design_probes
from quantum_channel.models import GaussianModState
from .config import SessionConfig
from .records import OscillatorRecord, Role

logger = logging.getLogger(__name__)

ENSEMBLE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GaussianEnsemble:
    """高斯调制的高斯态系综：均值 N(center, modulation)，每个态方差 state_var"""
    center: Tuple[float, float]
    modulation: Tuple[float, float]
    state_var: Tuple[float, float]

    def mixture_mean(self) -> np.ndarray:
        return np.array(self.center, dtype=float)

    def mixture_covariance(self) -> np.ndarray:
        return np.diag(np.array(self.modulation) + np.array(self.state_var))


def coherent_ensemble(v_mod: float) -> GaussianEnsemble:
    return GaussianEnsemble((0.0, 0.0), (v_mod, v_mod), (VACUUM_VARIANCE, VACUUM_VARIANCE))


def squeezed_ensemble(v_mod: float, var_p: float) -> GaussianEnsemble:
    """p 压缩态系综，调制方差按分量补上 0.5 - var，使混合态与相干系综一致"""
    var_x = VACUUM_VARIANCE ** 2 / var_p
    modulation = (v_mod + VACUUM_VARIANCE - var_x, v_mod + VACUUM_VARIANCE - var_p)
    if min(modulation) < 0:
        raise DomainError(f"调制方差 {v_mod} 不足以补偿压缩态的反压缩分量 {var_x:.3f}")
    return GaussianEnsemble((0.0, 0.0), modulation, (var_x, var_p))


def check_source_indistinguishability(coh: GaussianEnsemble, sq: GaussianEnsemble) -> bool:
    """两个混合态的一阶、二阶矩一致（高斯混合的高斯态由前两阶矩决定）"""
    return bool(
        np.allclose(coh.mixture_mean(), sq.mixture_mean(), rtol=0.0, atol=ENSEMBLE_TOLERANCE)
        and np.allclose(coh.mixture_covariance(), sq.mixture_covariance(), rtol=0.0, atol=ENSEMBLE_TOLERANCE)
    )


@dataclass
class AliceBatch:
    """一批振子的私有数据（按原始顺序）"""
    means: np.ndarray
    variances: np.ndarray
    roles: List[Role]
    probe_index: np.ndarray
    probes: Optional[ProbeSet] = None

    @property
    def size(self) -> int:
        return self.means.shape[0]

    def indices(self, role: Role) -> np.ndarray:
        return np.array([i for i, r in enumerate(self.roles) if r is role], dtype=np.int64)

    def states(self):
        """逐个振子的 GaussianModState（只在需要时构造）"""
        return [GaussianModState(float(m[0]), float(m[1]), float(v[0]), float(v[1]))
                for m, v in zip(self.means, self.variances)]


def alice_prepare(cfg: SessionConfig, rng: np.random.Generator) -> Tuple[AliceBatch, List[OscillatorRecord]]:
    n_key, mu = cfg.n_key, cfg.n_bitcheck
    sigma = np.sqrt(cfg.v_mod)

    key_means = sigma * rng.standard_normal((n_key, 2))
    check_means = sigma * rng.standard_normal((mu, 2))
    means = [key_means, check_means]
    variances = [np.full((n_key + mu, 2), VACUUM_VARIANCE)]
    roles = [Role.KEY] * n_key + [Role.BITCHECK] * mu
    probe_index = [np.full(n_key + mu, -1)]
    probes = None

    if cfg.phase_route == "squeezed-checks":
        var_p = variance_from_squeezing_db(cfg.squeezing_db)
        coh = coherent_ensemble(cfg.v_mod)
        sq = squeezed_ensemble(cfg.v_mod, var_p)
        if not check_source_indistinguishability(coh, sq):
            raise DomainError("压缩检验系综与相干系综的平均态不一致")
        nu = cfg.n_checks
        means.append(np.sqrt(np.array(sq.modulation)) * rng.standard_normal((nu, 2)))
        variances.append(np.tile(np.array(sq.state_var), (nu, 1)))
        roles += [Role.CHECK] * nu
        probe_index.append(np.full(nu, -1))
    else:
        probes = design_probes(cfg.cutoff, eps_max=cfg.eps_max, cond_max=cfg.cond_max,
                               rng=rng, copies_per_probe=cfg.probe_copies)
        alphas = np.array(probes.alphas, dtype=complex)
        amplitudes = np.sqrt(2.0) * np.column_stack([alphas.real, alphas.imag])
        means.append(np.repeat(amplitudes, cfg.probe_copies, axis=0))
        variances.append(np.full((probes.size * cfg.probe_copies, 2), VACUUM_VARIANCE))
        roles += [Role.PROBE] * (probes.size * cfg.probe_copies)
        probe_index.append(np.repeat(np.arange(probes.size), cfg.probe_copies))

    batch = AliceBatch(
        means=np.vstack(means),
        variances=np.vstack(variances),
        roles=roles,
        probe_index=np.concatenate(probe_index),
        probes=probes,
    )

    records = [
        OscillatorRecord(index=i, role=role, alice_x=float(batch.means[i, 0]), alice_p=float(batch.means[i, 1]),
                         probe_index=int(batch.probe_index[i]) if role is Role.PROBE else None)
        for i, role in enumerate(roles)
    ]
    logger.info(f"1️⃣ Alice 制备完成: g={batch.size} (N={n_key}, mu={mu}, 相位={batch.size - n_key - mu})")
    return batch, records


def _check_permutation(pi: np.ndarray, size: int):
    if pi.shape != (size,):
        raise DomainError(f"置换长度 {pi.shape} 与批大小 {size} 不符")
    if not np.array_equal(np.sort(pi), np.arange(size)):
        raise DomainError("pi 不是一个置换")


def permute(batch, pi: Sequence[int]):
    """发送顺序：第 t 个位置放原始第 pi[t] 个振子"""
    pi = np.asarray(pi, dtype=np.int64)
    _check_permutation(pi, len(batch))
    if isinstance(batch, np.ndarray):
        return batch[pi]
    return [batch[i] for i in pi]


def unpermute(batch, pi: Sequence[int]):
    pi = np.asarray(pi, dtype=np.int64)
    _check_permutation(pi, len(batch))
    if isinstance(batch, np.ndarray):
        restored = np.empty_like(batch)
        restored[pi] = batch
        return restored
    restored = [None] * len(batch)
    for t, i in enumerate(pi):
        restored[i] = batch[t]
    return restored
