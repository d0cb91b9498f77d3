"""
bit_encoding 顶级模块
功能：周期分箱编码 + 等概率切片编码 + Bob 端解码规则
"""

from .periodic import (
    SQRT_PI,
    PeriodicBinning,
    spacings_for_alpha,
    split_periodic,
    bit_from_integer,
    decode_periodic,
    decode_periodic_batch,
)
from .slices import (
    LABELINGS,
    DECODE_RULES,
    REMAINDER_RULES,
    SliceMap,
    build_equiprobable_slices,
    slice_bits,
    slice_labels_batch,
    slice_remainder,
    remainder_candidates,
    posterior_interval_masses,
    log_posterior_interval_masses,
    decode_slice,
    decode_slice_batch,
    map_decode_slice,
    nearest_decode_slice,
)

__all__ = [
    # 周期编码
    'SQRT_PI',
    'PeriodicBinning',
    'spacings_for_alpha',
    'split_periodic',
    'bit_from_integer',
    'decode_periodic',
    'decode_periodic_batch',

    # 切片编码
    'LABELINGS',
    'DECODE_RULES',
    'REMAINDER_RULES',
    'SliceMap',
    'build_equiprobable_slices',
    'slice_bits',
    'slice_labels_batch',
    'slice_remainder',
    'remainder_candidates',
    'posterior_interval_masses',
    'log_posterior_interval_masses',
    'decode_slice',
    'decode_slice_batch',
    'map_decode_slice',
    'nearest_decode_slice',
]

__version__ = "1.0.0"

import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())
