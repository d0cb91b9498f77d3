"""
相干态与位移压缩态的 Fock 基展开
约定：a = (x + i p)/sqrt(2)，真空方差 0.5，因此 alpha = (x0 + i p0)/sqrt(2)
"""
import logging

import numpy as np
from scipy.special import gammaln

from .conventions import VACUUM_VARIANCE, FockVector, DomainError

logger = logging.getLogger(__name__)

# 最小不确定度判据的相对容差
MIN_UNCERTAINTY_TOLERANCE = 1e-9


def coherent_fock(alpha: complex, cutoff: int) -> FockVector:
    """
    amps[n] = exp(-|alpha|^2/2) alpha^n / sqrt(n!)
    模长在对数空间计算（n! 超过 170 也不溢出），相位单独累加
    """
    if cutoff < 0:
        raise DomainError(f"截断必须非负: {cutoff}")

    alpha = complex(alpha)
    n = np.arange(cutoff + 1)
    radius = abs(alpha)

    if radius == 0.0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
    else:
        log_mag = -0.5 * radius ** 2 + n * np.log(radius) - 0.5 * gammaln(n + 1)
        phase = np.exp(1j * n * np.angle(alpha))
        amps = np.exp(log_mag) * phase

    result = FockVector.from_array(amps)
    if result.truncation_warning:
        logger.warning(f"⚠️ 相干态 |alpha|={radius:.3f} 在截断 {cutoff} 处亏损 {result.deficit:.3f}")
    return result


def squeezed_fock(x0: float, p0: float, var_x: float, var_p: float, cutoff: int) -> FockVector:
    """
    位移压缩态 D(alpha) S(r)|0> 的 Fock 振幅（仅限纯的最小不确定度态）

    Hermite 递推写在振幅上：
        c_0     = exp(-|alpha|^2/2 - conj(alpha)^2 t/2) / sqrt(cosh r)
        c_{n+1} = (beta c_n - t sqrt(n) c_{n-1}) / sqrt(n+1)
    其中 r = -ln(2 var_x)/2，t = tanh r，beta = alpha + conj(alpha) t
    """
    if cutoff < 0:
        raise DomainError(f"截断必须非负: {cutoff}")
    if var_x <= 0 or var_p <= 0:
        raise DomainError(f"方差必须为正: var_x={var_x}, var_p={var_p}")

    product = var_x * var_p
    if abs(product - VACUUM_VARIANCE ** 2) > MIN_UNCERTAINTY_TOLERANCE * VACUUM_VARIANCE ** 2:
        raise DomainError(f"非最小不确定度态: var_x*var_p={product:.6g}，应为 {VACUUM_VARIANCE ** 2}")

    alpha = complex(x0, p0) / np.sqrt(2.0)
    r = -0.5 * np.log(var_x / VACUUM_VARIANCE)
    t = np.tanh(r)
    beta = alpha + np.conj(alpha) * t

    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[0] = np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * np.conj(alpha) ** 2 * t) / np.sqrt(np.cosh(r))
    for n in range(cutoff):
        previous = amps[n - 1] if n >= 1 else 0.0
        amps[n + 1] = (beta * amps[n] - t * np.sqrt(n) * previous) / np.sqrt(n + 1)

    result = FockVector.from_array(amps)
    if result.truncation_warning:
        logger.warning(f"⚠️ 压缩态 ({x0:.2f},{p0:.2f}) 在截断 {cutoff} 处亏损 {result.deficit:.3f}")
    return result
