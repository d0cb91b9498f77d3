"""
css_codes 顶级模块
功能：GF(2) 运算 + 嵌套线性码 + 伴随式译码 + 隐私放大
"""

from . import gf2
from .matrices import ParityCheckMatrix, NestedCodePair, CodeError, verify_nested
from .decoding import (
    CosetTable,
    syndrome,
    syndrome_decode,
    privacy_amplify,
    amplify_rows,
    block_split,
)
from .library import (
    repetition_code,
    hamming_7_4,
    bch_15_7,
    simplex_pair,
    even_weight_subcode_pair,
    repetition_pair,
    nested_pair,
    minimum_distance,
    correction_radius,
    list_codes,
)
from .loader import parse_bit_matrix, load_bit_matrix, load_nested_pair

__all__ = [
    'gf2',

    # 矩阵
    'ParityCheckMatrix',
    'NestedCodePair',
    'CodeError',
    'verify_nested',

    # 译码
    'CosetTable',
    'syndrome',
    'syndrome_decode',
    'privacy_amplify',
    'amplify_rows',
    'block_split',

    # 内置码
    'repetition_code',
    'hamming_7_4',
    'bch_15_7',
    'simplex_pair',
    'even_weight_subcode_pair',
    'repetition_pair',
    'nested_pair',
    'minimum_distance',
    'correction_radius',
    'list_codes',

    # 文件
    'parse_bit_matrix',
    'load_bit_matrix',
    'load_nested_pair',
]

__version__ = "1.0.0"

import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())
