"""
逐切片纠错与隐私放大

每个切片先判断译码器是否胜任：
  e_up = e_hat + 3 sqrt(e_hat (1 - e_hat) / n_v)，e_hat = 0 时取 3 / n_v
  预计失败块数 = 块数 * Pr[n 位中错误 > t]（按 e_up 计算）
速率 <= 0 或预计失败块数超过上限的切片整体公开，Bob 直接采用 Alice 的比特作为低位；
其余切片按块公布伴随式，Bob 纠错后用 secret_rows 做隐私放大
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from core_math.conventions import GaussianDist
from bit_encoding.slices import SliceMap, decode_slice_batch, REMAINDER_RULES
from key_rates.css import css_rate
from css_codes.matrices import NestedCodePair
from css_codes.decoding import syndrome, syndrome_decode, amplify_rows, block_split
from css_codes.library import correction_radius
from .bob import ChannelFit
from .records import SliceResult
from .transcript import Transcript

logger = logging.getLogger(__name__)


@dataclass
class ReconciliationResult:
    alice_bits: np.ndarray
    bob_bits: np.ndarray
    slices: List[SliceResult] = field(default_factory=list)

    @property
    def agreement(self) -> bool:
        return bool(np.array_equal(self.alice_bits, self.bob_bits))


def error_upper_bound(e_hat: float, n_v: int) -> float:
    if n_v < 1:
        return 1.0
    if e_hat == 0.0:
        return min(3.0 / n_v, 1.0)
    return min(e_hat + 3.0 * np.sqrt(e_hat * (1.0 - e_hat) / n_v), 1.0)


def expected_failed_blocks(e_hat: float, n_v: int, blocks: int, n: int, t: int) -> Tuple[float, float]:
    """返回 (预计失败块数, e_up)"""
    e_up = error_upper_bound(e_hat, n_v)
    return float(blocks * stats.binom.sf(t, n, e_up)), e_up


def lower_bits(labels: np.ndarray, i: int) -> np.ndarray:
    """标签的低 i-1 位（整数形式）"""
    return np.asarray(labels, dtype=np.int64) & ((1 << (i - 1)) - 1)


def slice_bit(labels: np.ndarray, i: int) -> np.ndarray:
    return (np.asarray(labels, dtype=np.int64) >> (i - 1)) & 1


def estimate_slice_errors(labels: np.ndarray, y: np.ndarray, s: SliceMap, rule: str, fit: ChannelFit,
                          remainders: Optional[np.ndarray] = None) -> List[float]:
    """验证子集：Alice 公开全部切片比特，Bob 以真实低位解码每个切片并统计误码"""
    noise = GaussianDist(0.0, fit.noise_variance)
    rates = []
    for i in range(1, s.m + 1):
        decoded = decode_slice_batch(rule, y, i, lower_bits(labels, i), s, noise, fit.gain, remainders)
        rates.append(float(np.mean(decoded != slice_bit(labels, i))) if labels.size else 0.0)
    return rates


def key_hex(bits: np.ndarray) -> str:
    """比特串按大端打包成十六进制"""
    if bits.size == 0:
        return ""
    return np.packbits(bits.astype(np.uint8)).tobytes().hex()


def reconcile(labels: np.ndarray, y: np.ndarray, s: SliceMap, rule: str, fit: ChannelFit,
              codes: NestedCodePair, e_hat: Sequence[float], e_p: Sequence[float], n_v: int,
              max_failed_blocks: float, transcript: Transcript,
              remainders: Optional[np.ndarray] = None) -> ReconciliationResult:
    """
    labels: Alice 的区间标签（仅密钥部分，长度已截成码长整数倍）
    y:      Bob 对应的 x 测量值
    """
    n = codes.length
    if labels.size % n:
        raise ValueError(f"密钥长度 {labels.size} 不是码长 {n} 的整数倍")
    if rule in REMAINDER_RULES and remainders is None:
        raise ValueError(f"规则 {rule} 需要区间内分位数")

    H1 = codes.H1
    secret = codes.secret_rows()
    t = correction_radius(H1)
    blocks = labels.size // n
    noise = GaussianDist(0.0, fit.noise_variance)

    bob_lower = np.zeros(labels.size, dtype=np.int64)
    alice_key: List[np.ndarray] = []
    bob_key: List[np.ndarray] = []
    results: List[SliceResult] = []

    for i in range(1, s.m + 1):
        alice_i = slice_bit(labels, i).astype(np.uint8)
        bob_raw = decode_slice_batch(rule, y, i, bob_lower, s, noise, fit.gain, remainders).astype(np.uint8)
        rate = css_rate(e_hat[i - 1], e_p[i - 1])
        fails, e_up = expected_failed_blocks(e_hat[i - 1], n_v, blocks, n, t)
        result = SliceResult(index=i, e_b=e_hat[i - 1], e_b_upper=e_up, e_p=e_p[i - 1], rate=rate,
                             expected_failed_blocks=fails, disclosed=False, blocks=blocks)

        if rate <= 0 or fails > max_failed_blocks or blocks == 0:
            transcript.publish("slice_disclosure", {"slice": i, "bits": alice_i}, values=alice_i)
            bob_i = alice_i
            result.disclosed = True
            logger.info(f"📢 切片 {i} 整体公开: rate={rate:.4f}, 预计失败块数={fails:.3g}")
        else:
            a_blocks, _ = block_split(alice_i, n)
            b_blocks, _ = block_split(bob_raw, n)
            syndromes = np.array([syndrome(H1, a) for a in a_blocks], dtype=np.uint8)
            transcript.publish("syndrome", {"slice": i, "syndromes": syndromes}, values=syndromes)

            corrected = np.array([syndrome_decode(b, xi, H1) for b, xi in zip(b_blocks, syndromes)],
                                 dtype=np.uint8)
            bob_i = corrected.ravel()
            alice_key.append(np.concatenate([amplify_rows(secret, a) for a in a_blocks]))
            bob_key.append(np.concatenate([amplify_rows(secret, b) for b in corrected]))
            result.key_bits = blocks * secret.shape[0]
            result.residual_errors = int(np.sum(bob_i != alice_i))
            logger.info(f"🔑 切片 {i}: {blocks} 块, 保密比特 {result.key_bits}, "
                        f"纠错前误码 {int(np.sum(bob_raw != alice_i))}, 纠错后 {result.residual_errors}")

        bob_lower |= bob_i.astype(np.int64) << (i - 1)
        results.append(result)

    alice_bits = np.concatenate(alice_key) if alice_key else np.zeros(0, dtype=np.uint8)
    bob_bits = np.concatenate(bob_key) if bob_key else np.zeros(0, dtype=np.uint8)
    return ReconciliationResult(alice_bits=alice_bits, bob_bits=bob_bits, slices=results)

