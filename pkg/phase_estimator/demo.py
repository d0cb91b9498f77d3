"""
估计器演示流水线：探针过衰减信道 -> 零差 p 测量 -> F -> Gamma 反解 -> phi
与高斯尾概率的精确值对照
"""
import logging
import time
from typing import Dict, Any, Optional

import numpy as np

from core_math.fock import squeezed_fock
from core_math.special import loss_db_to_transmittance, variance_from_squeezing_db
from bit_encoding.periodic import SQRT_PI
from quantum_channel.models import GaussianModState, BeamSplitter, propagate
from quantum_channel.homodyne import homodyne_samples, effect_outside_prob, outside_indicators
from .probes import design_probes, DEFAULT_EPS_MAX, DEFAULT_COND_MAX
from .gamma import build_gamma
from .estimator import (
    invert_for_effect,
    conditioning_ok,
    phi_estimate,
    estimate_uncertainty,
    DEFAULT_RATIO_MIN,
)

logger = logging.getLogger(__name__)


def simulate_probe_statistics(alphas, channel, center: float, halfwidth: float,
                              copies: int, rng: np.random.Generator) -> np.ndarray:
    """每个探针 copies 份，p 分量零差，返回 F_k = 结果落在窗口外的比例"""
    count = len(alphas)
    means = np.empty((count, 2))
    variances = np.empty((count, 2))
    for k, alpha in enumerate(alphas):
        s = GaussianModState.from_alpha(alpha)
        means[k] = (s.mean_x, s.mean_p)
        variances[k] = (s.var_x, s.var_p)
    means, variances = channel.apply(means, variances, rng)

    F = np.empty(count)
    for k in range(count):
        values = homodyne_samples(np.full(copies, means[k, 1]), np.full(copies, variances[k, 1]), rng)
        F[k] = outside_indicators(values, np.full(copies, center), halfwidth).mean()
    return F


def run_estimator_demo(loss_db: float = 1.0, samples: int = 100000, cutoff: int = 2,
                       eps_max: float = DEFAULT_EPS_MAX, squeeze_db: float = 3.0, p0: float = 0.0,
                       halfwidth: float = SQRT_PI / 2.0, seed: Optional[int] = None,
                       cond_ratio: float = DEFAULT_RATIO_MIN,
                       cond_max: float = DEFAULT_COND_MAX) -> Dict[str, Any]:
    """
    目标态为 p 压缩的位移态 (0, p0)，效应为“p 落在 sqrt(T) p0 +- halfwidth 之外”
    返回估计值、精确值、误差带与条件检验结论
    """
    started = time.time()
    rng = np.random.default_rng(seed)
    channel = BeamSplitter(loss_db_to_transmittance(loss_db))
    center = np.sqrt(channel.transmittance) * p0

    logger.info("=" * 60)
    logger.info(f"🧪 估计器演示: loss={loss_db} dB, M={samples}, cutoff={cutoff}, 压缩={squeeze_db} dB")

    probes = design_probes(cutoff, eps_max=eps_max, cond_max=cond_max, rng=rng, copies_per_probe=samples)
    g = build_gamma(probes)
    logger.info(f"1️⃣ 探针就绪: K={probes.size}, cond={g.condition_number:.3e}")

    F = simulate_probe_statistics(probes.alphas, channel, center, halfwidth, samples, rng)
    logger.info(f"2️⃣ F 统计完成: min={F.min():.4f}, max={F.max():.4f}")

    effect = invert_for_effect(F, g)
    eps = float(np.max(np.maximum(g.deficits, 0.0)))
    well_conditioned = conditioning_ok(g, eps, F, cond_ratio)

    var_p = variance_from_squeezing_db(squeeze_db)
    target_state = GaussianModState.p_squeezed(0.0, p0, var_p)
    target = squeezed_fock(0.0, p0, target_state.var_x, var_p, cutoff)
    estimate = phi_estimate(effect, target)
    bands = estimate_uncertainty(target, g, F, samples)

    oracle = effect_outside_prob(propagate(target_state, channel), "p", center, halfwidth)
    deviation = abs(estimate.value - oracle)
    within = deviation <= bands.total()

    logger.info(f"3️⃣ 估计 phi={estimate.value:.5f} (原始 {estimate.raw:.5f}), 精确值={oracle:.5f}, "
                f"误差带={bands.total():.4f}, {'✅ 在带内' if within else '⚠️ 超出误差带'}")
    logger.info(f"⏱️ 用时 {time.time() - started:.2f}s")
    logger.info("=" * 60)

    return {
        "loss_db": loss_db,
        "samples": samples,
        "cutoff": cutoff,
        "seed": seed,
        "probes": probes.to_dict(),
        "condition_number": g.condition_number,
        "conditioning_ok": well_conditioned,
        "F": F.tolist(),
        "effect": effect.to_dict(),
        "estimate": estimate.value,
        "estimate_raw": estimate.raw,
        "oracle": oracle,
        "deviation": deviation,
        "bands": bands.to_dict(),
        "within_band": bool(within),
    }
