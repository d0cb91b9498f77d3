"""
CSS 速率公式、切片速率求和、高斯互信息、临界误码率
"""
import logging
from typing import List, Sequence, Tuple, Dict, Any

import numpy as np
from scipy import optimize

from core_math.conventions import DomainError
from core_math.special import binary_entropy
from .published import PUBLISHED_ROWS, CORRECTED_EP1_ZERO_LOSS

logger = logging.getLogger(__name__)

# 速率公式复现的容差
RATE_AUDIT_TOLERANCE = 0.002


def css_rate(e_b: float, e_p: float) -> float:
    """1 - h(e_b) - h(e_p)，可以为负，由调用者判断 > 0"""
    return 1.0 - binary_entropy(e_b) - binary_entropy(e_p)


def slice_rates(e_b: Sequence[float], e_p: Sequence[float]) -> Tuple[List[float], float]:
    """每个切片的速率（负值截为 0）与总和"""
    if len(e_b) != len(e_p):
        raise DomainError(f"e_b 与 e_p 长度不一致: {len(e_b)} vs {len(e_p)}")
    rates = [max(css_rate(b, p), 0.0) for b, p in zip(e_b, e_p)]
    return rates, float(sum(rates))


def gaussian_mutual_info(snr: float) -> float:
    """0.5 * log2(1 + snr)"""
    if snr < 0:
        raise DomainError(f"信噪比必须非负: {snr}")
    return float(0.5 * np.log2(1.0 + snr))


def critical_error_rate(xtol: float = 1e-12) -> float:
    """对称误码 1 - 2h(e) = 0 的根，约 0.110028"""
    return float(optimize.bisect(lambda e: 1.0 - 2.0 * binary_entropy(e), 1e-9, 0.5, xtol=xtol))


def rate_formula_audit(tolerance: float = RATE_AUDIT_TOLERANCE) -> List[Dict[str, Any]]:
    """
    逐个核对已发表 (e_b, e_p, R) 三元组与速率公式
    不一致的条目保留并标记，同时给出修正 e_p 后的值
    """
    entries = []
    for row in PUBLISHED_ROWS:
        for index in range(2):
            e_b, e_p, published = row.e_b[index], row.e_p[index], row.rates[index]
            if e_b is None or e_p is None or published is None:
                continue
            computed = css_rate(e_b, e_p)
            entry = {
                "loss_db": row.loss_db,
                "slice": index + 1,
                "e_b": e_b,
                "e_p": e_p,
                "published_rate": published,
                "computed_rate": computed,
                "difference": computed - published,
                "consistent": abs(computed - published) <= tolerance,
            }
            if row.loss_db == 0.0 and index == 0:
                entry["corrected_e_p"] = CORRECTED_EP1_ZERO_LOSS
                entry["corrected_rate"] = css_rate(e_b, CORRECTED_EP1_ZERO_LOSS)
            entries.append(entry)

    flagged = [e for e in entries if not e["consistent"]]
    for entry in flagged:
        logger.warning(
            f"⚠️ 速率不一致: {entry['loss_db']} dB 切片{entry['slice']} "
            f"公式={entry['computed_rate']:.4f} 已发表={entry['published_rate']}"
        )
    logger.info(f"📊 速率公式核对: {len(entries) - len(flagged)}/{len(entries)} 一致")
    return entries
