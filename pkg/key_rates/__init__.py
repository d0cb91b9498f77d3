"""
key_rates 顶级模块
功能：CSS 速率 + 切片误码精确积分 + 压缩阈值 + 已发表常数 + 速率表
"""

from .css import (
    css_rate,
    slice_rates,
    gaussian_mutual_info,
    critical_error_rate,
    rate_formula_audit,
)
from .bit_errors import (
    periodic_bit_error,
    slice_error_rates,
    monte_carlo_slice_error_rates,
    best_decode_configuration,
    clear_slice_error_cache,
    format_discrepancy_table,
)
from .threshold import ERROR_MODELS, ThresholdError, ThresholdResult, threshold_squeezing, solve_threshold
from .published import (
    PUBLISHED_ROWS,
    MODULATION_VARIANCE,
    MODULATION_CONVENTIONS,
    TABLE_MODULATION_VARIANCE,
    CORRECTED_EP1_ZERO_LOSS,
    provenance,
)
from .table_report import EP_SOURCES, DEFAULT_LOSSES, TableError, build_table_rows, write_table_csv

__all__ = [
    # 速率公式
    'css_rate',
    'slice_rates',
    'gaussian_mutual_info',
    'critical_error_rate',
    'rate_formula_audit',

    # 误码
    'periodic_bit_error',
    'slice_error_rates',
    'monte_carlo_slice_error_rates',
    'best_decode_configuration',
    'clear_slice_error_cache',
    'format_discrepancy_table',

    # 阈值
    'ERROR_MODELS',
    'ThresholdError',
    'ThresholdResult',
    'threshold_squeezing',
    'solve_threshold',

    # 常数与表格
    'PUBLISHED_ROWS',
    'MODULATION_VARIANCE',
    'MODULATION_CONVENTIONS',
    'TABLE_MODULATION_VARIANCE',
    'CORRECTED_EP1_ZERO_LOSS',
    'provenance',
    'EP_SOURCES',
    'DEFAULT_LOSSES',
    'TableError',
    'build_table_rows',
    'write_table_csv',
]

__version__ = "1.0.0"

import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())
