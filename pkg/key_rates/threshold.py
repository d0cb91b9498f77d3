"""
压缩阈值：对误码模型 sigma_tilde -> (e_b, e_p) 求 css_rate = 0 的根，换算成 dB

误码模型（密度方差 sigma_tilde^2/2，sqrt(pi) 格点）：
  symmetric-erfc    e = erfc(sqrt(pi)/(2 sigma_tilde))，即高斯尾超过半个格距
  symmetric-lattice e = 按奇偶性的精确格点和
"""
import logging
from dataclasses import dataclass, asdict
from typing import Callable, Dict, Tuple, Any

import numpy as np
from scipy import optimize, special

from core_math.special import squeezing_db
from bit_encoding.periodic import SQRT_PI
from .bit_errors import periodic_bit_error
from .css import css_rate, critical_error_rate

logger = logging.getLogger(__name__)

ErrorModel = Callable[[float], Tuple[float, float]]

# sigma_tilde 的搜索区间
SIGMA_BRACKET = (0.05, 3.0)


class ThresholdError(RuntimeError):
    """误码模型在搜索区间上没有变号"""


def _symmetric_erfc(sigma_tilde: float) -> Tuple[float, float]:
    e = float(special.erfc(SQRT_PI / (2.0 * sigma_tilde)))
    return e, e


def _symmetric_lattice(sigma_tilde: float) -> Tuple[float, float]:
    e, _ = periodic_bit_error(sigma_tilde / np.sqrt(2.0), SQRT_PI)
    return e, e


ERROR_MODELS: Dict[str, ErrorModel] = {
    "symmetric-erfc": _symmetric_erfc,
    "symmetric-lattice": _symmetric_lattice,
}


@dataclass(frozen=True)
class ThresholdResult:
    model: str
    sigma_tilde: float
    threshold_db: float
    critical_error: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def threshold_squeezing(error_model: ErrorModel, bracket: Tuple[float, float] = SIGMA_BRACKET,
                        xtol: float = 1e-8) -> float:
    """二分求 css_rate(error_model(sigma)) = 0，返回 10*log10(1/sigma^2)"""
    rate = lambda sigma: css_rate(*error_model(sigma))
    lo, hi = bracket
    if rate(lo) * rate(hi) > 0:
        logger.error(f"误码模型在 [{lo}, {hi}] 上没有变号")
        raise ThresholdError(f"误码模型在 [{lo}, {hi}] 上没有变号")
    sigma = optimize.bisect(rate, lo, hi, xtol=xtol)
    return squeezing_db(sigma ** 2)


def solve_threshold(model: str) -> ThresholdResult:
    """按名字求阈值，同时给出临界误码率"""
    if model not in ERROR_MODELS:
        raise ThresholdError(f"未知误码模型: {model}（可选 {', '.join(ERROR_MODELS)}）")
    db = threshold_squeezing(ERROR_MODELS[model])
    sigma = float(np.sqrt(10.0 ** (-db / 10.0)))
    result = ThresholdResult(model=model, sigma_tilde=sigma, threshold_db=db,
                             critical_error=critical_error_rate())
    logger.info(f"✅ 阈值 {model}: {db:.3f} dB (sigma_tilde={sigma:.4f})")
    return result
