"""
qkd_session 顶级模块
功能：会话配置 + Alice/Bob 流程 + 公开记录 + 纠错与隐私放大 + 调度
"""

from .settings import LabSettings
from .config import SessionConfig, SliceConfig, ConfigError, load_session_config, PHASE_ROUTES
from .records import (
    Role,
    Verdict,
    OscillatorRecord,
    SliceResult,
    SessionReport,
    EXIT_KEY,
    EXIT_ERROR,
    EXIT_GATE_ABORT,
    EXIT_CONDITIONING_ABORT,
)
from .transcript import Transcript, Message, to_jsonable
from .alice import (
    AliceBatch,
    GaussianEnsemble,
    alice_prepare,
    permute,
    unpermute,
    coherent_ensemble,
    squeezed_ensemble,
    check_source_indistinguishability,
)
from .bob import (
    BitErrorEstimate,
    ChannelFit,
    bob_measure,
    fit_channel,
    bit_check_indicators,
    estimate_bit_error,
    collect_F_statistics,
)
from .reconciliation import (
    ReconciliationResult,
    reconcile,
    estimate_slice_errors,
    expected_failed_blocks,
    error_upper_bound,
    key_hex,
)
from .session import run_session
from .lab_manager import LabManager

__all__ = [
    # 配置
    'LabSettings',
    'SessionConfig',
    'SliceConfig',
    'ConfigError',
    'load_session_config',
    'PHASE_ROUTES',

    # 记录
    'Role',
    'Verdict',
    'OscillatorRecord',
    'SliceResult',
    'SessionReport',
    'EXIT_KEY',
    'EXIT_ERROR',
    'EXIT_GATE_ABORT',
    'EXIT_CONDITIONING_ABORT',
    'Transcript',
    'Message',
    'to_jsonable',

    # Alice
    'AliceBatch',
    'GaussianEnsemble',
    'alice_prepare',
    'permute',
    'unpermute',
    'coherent_ensemble',
    'squeezed_ensemble',
    'check_source_indistinguishability',

    # Bob
    'BitErrorEstimate',
    'ChannelFit',
    'bob_measure',
    'fit_channel',
    'bit_check_indicators',
    'estimate_bit_error',
    'collect_F_statistics',

    # 纠错
    'ReconciliationResult',
    'reconcile',
    'estimate_slice_errors',
    'expected_failed_blocks',
    'error_upper_bound',
    'key_hex',

    # 会话
    'run_session',
    'LabManager',
]

__version__ = "1.0.0"

import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())
logger.debug(f"📦 qkd_session v{__version__} 已加载")
