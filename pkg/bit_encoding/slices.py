"""
切片编码：实轴按 N(0, sigma^2) 分成 2^m 个等概率区间，每个区间带一个 m 位标签
标签的第 i 位（i 从 1 开始，S_1 为最低位）就是第 i 个切片函数 S_i(x)

Bob 的解码规则：
  map          - 区间后验质量 argmax（对高位切片求和）
  nearest      - 与 y/gain 最近的一致区间
  map-sbar     - 已知区间内分位数 u 时的候选点后验 argmax
  nearest-sbar - 已知 u 时最近的一致候选点
"""
import json
import logging
from dataclasses import dataclass
from typing import Dict, Any, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from core_math.conventions import GaussianDist, DomainError
from core_math.special import inverse_normal_cdf

logger = logging.getLogger(__name__)

LABELINGS = ("binary", "gray")
DECODE_RULES = ("map", "nearest", "map-sbar", "nearest-sbar")
REMAINDER_RULES = ("map-sbar", "nearest-sbar")

# 区间先验质量的构造容差
PRIOR_MASS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SliceMap:
    """2^m 个区间的边界与标签（标签为整数，bit i-1 即 S_i）"""
    m: int
    boundaries: Tuple[float, ...]
    labels: Tuple[int, ...]
    signal_sigma: float
    labeling: str = "binary"

    def __post_init__(self):
        if len(self.boundaries) != 2 ** self.m - 1:
            raise DomainError(f"边界数应为 {2 ** self.m - 1}，实际 {len(self.boundaries)}")
        if any(b >= a for a, b in zip(self.boundaries[1:], self.boundaries[:-1])):
            raise DomainError("边界必须严格递增")
        if len(set(self.labels)) != len(self.labels) or len(self.labels) != 2 ** self.m:
            raise DomainError("标签必须互不相同且共 2^m 个")

    @property
    def intervals(self) -> int:
        return 2 ** self.m

    @property
    def edges(self) -> np.ndarray:
        """含 -inf/+inf 的全部区间端点"""
        return np.concatenate(([-np.inf], np.array(self.boundaries), [np.inf]))

    def interval_index(self, x):
        """边界点归右侧区间（半开约定）"""
        return np.searchsorted(np.array(self.boundaries), x, side="right")

    def label_bits(self, label: int) -> Tuple[int, ...]:
        """标签 -> (S_1, ..., S_m)"""
        return tuple((label >> i) & 1 for i in range(self.m))

    def bit_of_intervals(self, i: int) -> np.ndarray:
        """每个区间的 S_i"""
        return (np.array(self.labels) >> (i - 1)) & 1

    def lower_values(self, i: int) -> np.ndarray:
        """每个区间标签的低 i-1 位（整数形式）"""
        return np.array(self.labels) & ((1 << (i - 1)) - 1)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "boundaries": list(self.boundaries),
            "labels": list(self.labels),
            "signal_sigma": self.signal_sigma,
            "labeling": self.labeling,
        }

    @classmethod
    def from_json(cls, text: str) -> 'SliceMap':
        data = json.loads(text)
        return cls(
            m=int(data["m"]),
            boundaries=tuple(float(b) for b in data["boundaries"]),
            labels=tuple(int(v) for v in data["labels"]),
            signal_sigma=float(data["signal_sigma"]),
            labeling=data.get("labeling", "binary"),
        )


def _labels_for(m: int, labeling: str) -> Tuple[int, ...]:
    if labeling == "binary":
        return tuple(range(2 ** m))
    if labeling == "gray":
        return tuple(k ^ (k >> 1) for k in range(2 ** m))
    raise DomainError(f"未知标签方式: {labeling}")


def build_equiprobable_slices(signal_sigma: float, m: int, labeling: str = "binary") -> SliceMap:
    """边界取 N(0, sigma^2) 的 k/2^m 分位点"""
    if not 1 <= m <= 8:
        raise DomainError(f"切片数 m 必须在 1..8: {m}")
    if not signal_sigma > 0:
        raise DomainError(f"signal_sigma 必须为正: {signal_sigma}")

    count = 2 ** m
    boundaries = tuple(signal_sigma * inverse_normal_cdf(k / count) for k in range(1, count))
    slice_map = SliceMap(
        m=m,
        boundaries=boundaries,
        labels=_labels_for(m, labeling),
        signal_sigma=float(signal_sigma),
        labeling=labeling,
    )
    logger.debug(f"切片映射已建立: m={m}, labeling={labeling}, sigma={signal_sigma:.4f}")
    return slice_map


def slice_bits(x: float, s: SliceMap) -> Tuple[int, ...]:
    """x 所在区间的标签，按 (S_1, ..., S_m) 返回"""
    k = int(s.interval_index(x))
    return s.label_bits(s.labels[k])


def slice_labels_batch(x: np.ndarray, s: SliceMap) -> np.ndarray:
    """批量取标签（整数形式）"""
    return np.array(s.labels)[s.interval_index(np.asarray(x))]


def slice_remainder(x, s: SliceMap):
    """区间内分位数 u in [0,1)：u = 2^m * Phi(x/sigma) - k"""
    x = np.asarray(x, dtype=float)
    k = s.interval_index(x)
    u = s.intervals * special.ndtr(x / s.signal_sigma) - k
    return np.clip(u, 0.0, np.nextafter(1.0, 0.0))


def remainder_candidates(u, s: SliceMap) -> np.ndarray:
    """已知 u 时每个区间对应的唯一候选值 c_k = sigma * Phi^{-1}((k+u)/2^m)，形状 (N, 2^m)"""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    k = np.arange(s.intervals)
    with np.errstate(divide="ignore"):
        return s.signal_sigma * special.ndtri((k[None, :] + u[:, None]) / s.intervals)


def _interval_mass(lo_z: np.ndarray, hi_z: np.ndarray) -> np.ndarray:
    """Phi(hi) - Phi(lo)，两端都在右尾时改用对称形式"""
    with np.errstate(invalid="ignore"):
        right_tail = special.ndtr(-lo_z) - special.ndtr(-hi_z)
        left_side = special.ndtr(hi_z) - special.ndtr(lo_z)
    return np.where(lo_z > 0, right_tail, left_side)


def _posterior_z(y, s: SliceMap, noise_variance: float, gain: float,
                 noise_mean: float, prior_sigma: Optional[float]) -> Tuple[np.ndarray, np.ndarray]:
    """x | y 的后验为 N(center, spread^2)，返回各区间端点的标准化坐标 (lo_z, hi_z)"""
    y = np.atleast_1d(np.asarray(y, dtype=float)) - noise_mean
    var_a = (s.signal_sigma if prior_sigma is None else prior_sigma) ** 2
    total = gain ** 2 * var_a + noise_variance
    center = gain * var_a * y / total
    spread = np.sqrt(var_a * noise_variance / total)
    edges = s.edges
    lo_z = (edges[None, :-1] - center[:, None]) / spread
    hi_z = (edges[None, 1:] - center[:, None]) / spread
    return lo_z, hi_z


def posterior_interval_masses(y, s: SliceMap, noise_variance: float, gain: float,
                              noise_mean: float = 0.0, prior_sigma: Optional[float] = None) -> np.ndarray:
    """
    给定 y = gain*x + n，x ~ N(0, sigma^2)，n ~ N(noise_mean, noise_variance)，
    返回 Pr[x 落在区间 k | y]，形状 (N, 2^m)
    prior_sigma 缺省时取 s.signal_sigma
    """
    return _interval_mass(*_posterior_z(y, s, noise_variance, gain, noise_mean, prior_sigma))


def log_posterior_interval_masses(y, s: SliceMap, noise_variance: float, gain: float,
                                  noise_mean: float = 0.0, prior_sigma: Optional[float] = None) -> np.ndarray:
    """
    posterior_interval_masses 的对数形式
    y 远在尾部时各区间质量都会下溢成 0，对数形式仍能比较大小
    """
    lo_z, hi_z = _posterior_z(y, s, noise_variance, gain, noise_mean, prior_sigma)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        # log(Phi(-lo) - Phi(-hi))，区间在后验均值右侧
        right_near = special.log_ndtr(-lo_z)
        right_tail = right_near + np.log1p(-np.exp(special.log_ndtr(-hi_z) - right_near))
        # log(Phi(hi) - Phi(lo))
        left_near = special.log_ndtr(hi_z)
        left_side = left_near + np.log1p(-np.exp(special.log_ndtr(lo_z) - left_near))
    return np.where(lo_z > 0, right_tail, left_side)


def _lower_values_of(known_lower_bits: Sequence[int]) -> int:
    value = 0
    for position, bit in enumerate(known_lower_bits):
        if bit not in (0, 1):
            raise DomainError(f"低位比特必须是 0/1: {known_lower_bits}")
        value |= int(bit) << position
    return value


def decode_slice_batch(rule: str, y, i: int, lower_values, s: SliceMap,
                       noise: GaussianDist, gain: float, remainders=None) -> np.ndarray:
    """
    批量解码第 i 个切片
    lower_values: 每个样本已纠正的低 i-1 位（整数形式）
    remainders:   *-sbar 规则需要的 u
    """
    if rule not in DECODE_RULES:
        raise DomainError(f"未知解码规则: {rule}")
    if not 1 <= i <= s.m:
        raise DomainError(f"切片序号超出 1..{s.m}: {i}")

    y = np.atleast_1d(np.asarray(y, dtype=float))
    lower_values = np.broadcast_to(np.asarray(lower_values, dtype=np.int64), y.shape)
    consistent = s.lower_values(i)[None, :] == lower_values[:, None]
    bit_of = s.bit_of_intervals(i)
    y_eff = y - noise.mean

    if rule in REMAINDER_RULES:
        if remainders is None:
            raise DomainError(f"规则 {rule} 需要区间内分位数")
        candidates = remainder_candidates(remainders, s)
        with np.errstate(invalid="ignore"):
            offset = y_eff[:, None] - gain * candidates
        offset = np.where(np.isfinite(offset), offset, np.inf)

        if rule == "map-sbar":
            loglik = np.where(consistent, -0.5 * offset ** 2 / noise.variance, -np.inf)
            with np.errstate(divide="ignore", invalid="ignore"):
                l1 = special.logsumexp(np.where(bit_of == 1, loglik, -np.inf), axis=1)
                l0 = special.logsumexp(np.where(bit_of == 0, loglik, -np.inf), axis=1)
            return (l1 > l0).astype(np.int64)

        distance = np.where(consistent, np.abs(offset), np.inf)
        return bit_of[np.argmin(distance, axis=1)]

    if rule == "map":
        log_masses = log_posterior_interval_masses(y, s, noise.variance, gain, noise.mean)
        log_masses = np.where(consistent, log_masses, -np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            l1 = special.logsumexp(np.where(bit_of == 1, log_masses, -np.inf), axis=1)
            l0 = special.logsumexp(np.where(bit_of == 0, log_masses, -np.inf), axis=1)
        return (l1 > l0).astype(np.int64)

    # nearest
    if gain == 0:
        raise DomainError("nearest 规则需要非零增益")
    estimate = y_eff / gain
    edges = s.edges
    below = edges[None, :-1] - estimate[:, None]
    above = estimate[:, None] - edges[None, 1:]
    distance = np.maximum(np.maximum(below, above), 0.0)
    distance = np.where(consistent, distance, np.inf)
    return bit_of[np.argmin(distance, axis=1)]


def decode_slice(rule: str, x_received: float, i: int, known_lower_bits: Sequence[int], s: SliceMap,
                 noise: GaussianDist, gain: float, remainder: Optional[float] = None) -> int:
    """单个样本的解码，低位比特以 (S_1, ..., S_{i-1}) 给出"""
    if len(known_lower_bits) != i - 1:
        raise DomainError(f"低位比特长度应为 {i - 1}，实际 {len(known_lower_bits)}")
    lower = _lower_values_of(known_lower_bits)
    if not np.any(s.lower_values(i) == lower):
        raise DomainError(f"没有区间与低位比特 {tuple(known_lower_bits)} 一致")
    remainders = None if remainder is None else np.array([remainder])
    return int(decode_slice_batch(rule, [x_received], i, [lower], s, noise, gain, remainders)[0])


def map_decode_slice(x_received: float, i: int, known_lower_bits: Sequence[int], s: SliceMap,
                     noise: GaussianDist, gain: float) -> int:
    """后验质量 argmax，平局取 0"""
    return decode_slice("map", x_received, i, known_lower_bits, s, noise, gain)


def nearest_decode_slice(x_received: float, i: int, known_lower_bits: Sequence[int], s: SliceMap,
                         noise: GaussianDist, gain: float) -> int:
    """取与 y/gain 距离最近的一致区间"""
    return decode_slice("nearest", x_received, i, known_lower_bits, s, noise, gain)
