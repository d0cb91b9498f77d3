"""
会话编排：制备 -> 置换 -> 信道 -> 还原/公开 -> 测量 -> 估计 e_b 与 Phi -> 门限 -> 纠错 -> 隐私放大

门限：css_rate(e_b, Phi) > 0 才继续；否则中止，不产生密钥
相位误差两条路线：
  squeezed-checks  - p 压缩检验态直接测量
  coherent-probes  - K 个相干探针各 M 份，经 Gamma 反解估计每个检验中心的 phi(j)
"""
import logging
import time
from collections import defaultdict
from typing import Any, Dict, List, Optional

import numpy as np

from core_math.fock import squeezed_fock
from core_math.special import variance_from_squeezing_db
from core_math.conventions import VACUUM_VARIANCE
from bit_encoding.slices import (
    build_equiprobable_slices,
    slice_labels_batch,
    slice_remainder,
    REMAINDER_RULES,
)
from key_rates.css import css_rate
from quantum_channel.homodyne import outside_indicators
from phase_estimator.gamma import build_gamma
from phase_estimator.estimator import (
    invert_for_effect,
    conditioning_ok,
    phi_estimate,
    aggregate_phase_error,
    homogeneity_pvalue,
)
from system_monitor.collector import SystemMonitor
from .alice import alice_prepare, permute, unpermute, AliceBatch
from .bob import (
    bob_measure,
    fit_channel,
    bit_check_indicators,
    estimate_bit_error,
    collect_F_statistics,
    ChannelFit,
)
from .config import SessionConfig
from .records import Role, Verdict, SessionReport
from .reconciliation import estimate_slice_errors, reconcile, key_hex
from .settings import LabSettings
from .transcript import Transcript

logger = logging.getLogger(__name__)

ROLE_CODES = {Role.KEY: 0, Role.BITCHECK: 1, Role.CHECK: 2, Role.PROBE: 3}


def default_test_centers(halfwidth: float) -> tuple:
    """探针均值附近的中心 0 与 +- 一个半宽"""
    return (-halfwidth, 0.0, halfwidth)


def _squeezed_checks_phase(cfg: SessionConfig, batch: AliceBatch, outcomes: np.ndarray, fit: ChannelFit,
                           transcript: Transcript, diagnostics: Dict[str, Any]) -> float:
    idx = batch.indices(Role.CHECK)
    centers = batch.means[idx, 1]
    transcript.publish("check_disclosure", {"role": "check", "indices": idx, "values": centers}, values=centers)
    halfwidth = cfg.bin_spacings[1] / 2.0
    indicators = outside_indicators(outcomes[idx], fit.gain * centers, halfwidth)
    diagnostics["homogeneity_pvalue"] = homogeneity_pvalue(indicators)
    return aggregate_phase_error(indicators)


def _coherent_probes_phase(cfg: SessionConfig, batch: AliceBatch, outcomes: np.ndarray, fit: ChannelFit,
                           transcript: Transcript, diagnostics: Dict[str, Any]) -> Optional[float]:
    """返回 Phi；条件检验失败时返回 None"""
    probes = batch.probes
    halfwidth = cfg.bin_spacings[1] / 2.0
    centers = np.array(cfg.test_centers if cfg.test_centers is not None else default_test_centers(halfwidth))
    transcript.publish("probe_centers", {
        "alphas": [[a.real, a.imag] for a in probes.alphas],
        "copies": probes.copies_per_probe,
        "centers": centers,
    })

    idx = batch.indices(Role.PROBE)
    F, indicators = collect_F_statistics(outcomes[idx], batch.probe_index[idx], probes.size,
                                         fit.gain * centers, halfwidth)
    g = build_gamma(probes)
    eps = float(np.max(np.maximum(g.deficits, 0.0)))
    diagnostics["condition_number"] = g.condition_number
    diagnostics["probe_eps"] = eps
    diagnostics["F"] = F.tolist()
    diagnostics["homogeneity_pvalue"] = min(
        homogeneity_pvalue(cell) for row in indicators for cell in row
    )

    checks = [conditioning_ok(g, eps, F[j], cfg.cond_ratio) for j in range(len(centers))]
    diagnostics["conditioning"] = checks
    if not all(checks):
        logger.warning(f"⚠️ 条件检验未通过: {checks}（||Gamma^-1 eta|| 不能忽略）")
        return None

    var_p = variance_from_squeezing_db(cfg.squeezing_db)
    var_x = VACUUM_VARIANCE ** 2 / var_p
    phis = []
    residuals = []
    for j, center in enumerate(centers):
        effect = invert_for_effect(F[j], g)
        target = squeezed_fock(0.0, float(center), var_x, var_p, cfg.cutoff)
        phis.append(phi_estimate(effect, target).value)
        residuals.append(effect.hermiticity_residual)
    diagnostics["phis"] = phis
    diagnostics["hermiticity_residuals"] = residuals
    return aggregate_phase_error(phis)


def _base_report(cfg: SessionConfig, seed: int, verdict: Verdict, e_b, phi, gate_rate,
                 transcript: Transcript, diagnostics: Dict[str, Any], started: float) -> SessionReport:
    return SessionReport(
        verdict=verdict,
        e_b=e_b.e_b,
        e_b_halfwidth=e_b.halfwidth,
        phi=phi,
        gate_rate=gate_rate,
        phase_route=cfg.phase_route,
        seed=seed,
        config=cfg.to_dict(),
        leaked_bits=transcript.leaked_bits,
        diagnostics=diagnostics,
        resources=SystemMonitor().collect_light(),
        elapsed_seconds=time.time() - started,
    )


def run_session(cfg: SessionConfig, transcript: Optional[Transcript] = None) -> SessionReport:
    """
    执行一次完整会话
    transcript 可由调用方传入以便事后检查公开消息
    """
    started = time.time()
    seed = cfg.seed if cfg.seed is not None else LabSettings.DEFAULT_SEED
    rng = np.random.default_rng(seed)
    transcript = transcript if transcript is not None else Transcript()
    stats = defaultdict(int)
    diagnostics: Dict[str, Any] = {}

    cfg.validate()
    channel = cfg.build_channel()
    codes = cfg.build_codes()
    spacing_x, _ = cfg.bin_spacings

    logger.info("=" * 60)
    logger.info(f"🚀 会话开始: route={cfg.phase_route}, channel={channel.describe()}, seed={seed}")

    # 1. 制备
    batch, _records = alice_prepare(cfg, rng)
    stats["oscillators"] = batch.size

    # 2. 置换后经信道发送，Bob 还原顺序
    pi = rng.permutation(batch.size)
    transcript.publish("permutation", {"pi": pi})
    sent_means, sent_vars = permute(batch.means, pi), permute(batch.variances, pi)
    recv_means, recv_vars = channel.apply(sent_means, sent_vars, rng)
    means_b, vars_b = unpermute(recv_means, pi), unpermute(recv_vars, pi)
    transcript.publish("roles", {"roles": np.array([ROLE_CODES[r] for r in batch.roles], dtype=np.int64)})
    logger.info(f"2️⃣ 已置换并通过信道: g={batch.size}")

    # 3. 测量
    outcomes = bob_measure(means_b, vars_b, batch.roles, rng)

    # 4. 比特检验
    idx_bc = batch.indices(Role.BITCHECK)
    disclosed_x = batch.means[idx_bc, 0]
    transcript.publish("check_disclosure", {"role": "bitcheck", "indices": idx_bc, "values": disclosed_x},
                       values=disclosed_x)
    fit = fit_channel(disclosed_x, outcomes[idx_bc])
    e_b = estimate_bit_error(bit_check_indicators(disclosed_x, outcomes[idx_bc], fit.gain, spacing_x / 2.0))
    diagnostics["gain"] = fit.gain
    diagnostics["noise_variance"] = fit.noise_variance
    logger.info(f"3️⃣ 比特检验: e_b={e_b.e_b:.4f} ± {e_b.halfwidth:.4f}, 增益={fit.gain:.4f}, "
                f"噪声方差={fit.noise_variance:.4f}")

    # 5. 相位误差
    if cfg.phase_route == "squeezed-checks":
        phi = _squeezed_checks_phase(cfg, batch, outcomes, fit, transcript, diagnostics)
    else:
        phi = _coherent_probes_phase(cfg, batch, outcomes, fit, transcript, diagnostics)

    if phi is None:
        transcript.publish("gate_verdict", {"verdict": Verdict.CONDITIONING_ABORT.value, "e_b": e_b.e_b})
        report = _base_report(cfg, seed, Verdict.CONDITIONING_ABORT, e_b, None, None,
                              transcript, diagnostics, started)
        logger.info(f"🛑 会话中止（条件检验）: exit={report.exit_code}")
        logger.info("=" * 60)
        return report

    # 6. 门限
    gate_rate = css_rate(e_b.e_b, phi)
    passed = gate_rate > 0
    transcript.publish("gate_verdict", {
        "verdict": Verdict.KEY.value if passed else Verdict.GATE_ABORT.value,
        "e_b": e_b.e_b, "phi": phi, "rate": gate_rate,
    })
    logger.info(f"4️⃣ 门限: e_b={e_b.e_b:.4f}, Phi={phi:.4f}, rate={gate_rate:.4f} -> {'通过' if passed else '中止'}")
    if not passed:
        report = _base_report(cfg, seed, Verdict.GATE_ABORT, e_b, phi, gate_rate, transcript, diagnostics, started)
        logger.info(f"🛑 会话中止（门限）: exit={report.exit_code}")
        logger.info("=" * 60)
        return report

    # 7. 切片、验证子集、纠错与隐私放大
    idx_key = batch.indices(Role.KEY)
    x_key = batch.means[idx_key, 0]
    y_key = outcomes[idx_key]
    s = build_equiprobable_slices(np.sqrt(cfg.v_mod), cfg.slices.m, cfg.slices.labeling)
    labels = slice_labels_batch(x_key, s).astype(np.int64)

    remainders = None
    if cfg.slices.decode in REMAINDER_RULES:
        remainders = slice_remainder(x_key, s)
        transcript.publish("remainders", {"u": remainders}, values=remainders)

    n_v = int(round(cfg.verify_fraction * idx_key.size))
    chosen = np.sort(rng.choice(idx_key.size, size=n_v, replace=False))
    rest = np.setdiff1d(np.arange(idx_key.size), chosen)
    verify_bits = ((labels[chosen, None] >> np.arange(s.m)[None, :]) & 1).astype(np.uint8)
    transcript.publish("verification", {"indices": chosen, "bits": verify_bits}, values=verify_bits)
    e_hat = estimate_slice_errors(labels[chosen], y_key[chosen], s, cfg.slices.decode, fit,
                                  None if remainders is None else remainders[chosen])
    diagnostics["slice_error_estimates"] = e_hat
    logger.info(f"5️⃣ 验证子集 n_v={n_v}: 各切片 e_b={['%.4g' % e for e in e_hat]}")

    usable = (rest.size // codes.length) * codes.length
    stats["discarded_tail"] = int(rest.size - usable)
    rest = rest[:usable]
    result = reconcile(
        labels[rest], y_key[rest], s, cfg.slices.decode, fit, codes, e_hat, cfg.phase_errors,
        n_v, cfg.max_failed_blocks, transcript, None if remainders is None else remainders[rest],
    )

    if transcript.contains_any(x_key):
        logger.error("❌ 公开记录中出现了密钥振子的 x 值")
        raise RuntimeError("transcript leaked a key-role x value")

    report = _base_report(cfg, seed, Verdict.KEY, e_b, phi, gate_rate, transcript, diagnostics, started)
    report.slices = result.slices
    report.alice_key = key_hex(result.alice_bits)
    report.bob_key = key_hex(result.bob_bits)
    report.key_length = int(result.alice_bits.size)
    report.key_agreement = result.agreement
    report.diagnostics["codes"] = codes.describe()
    report.diagnostics["counters"] = dict(stats)

    logger.info(f"✅ 会话完成: 密钥 {report.key_length} 比特, 一致={report.key_agreement}, "
                f"泄露={report.leaked_bits}, 用时 {report.elapsed_seconds:.2f}s")
    logger.info("=" * 60)
    return report


def transcript_summary(transcript: Transcript) -> List[Dict[str, Any]]:
    return [{"seq": m.seq, "kind": m.kind, "leak": m.leak} for m in transcript.messages]
