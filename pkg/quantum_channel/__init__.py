"""
quantum_channel 顶级模块
功能：高斯调制态 + 信道模型 + 零差测量
"""

from .models import (
    GaussianModState,
    ChannelModel,
    Lossless,
    BeamSplitter,
    NoisyGaussian,
    InterceptResend,
    propagate,
    parse_channel,
)
from .homodyne import (
    QUADRATURES,
    HomodyneOutcome,
    homodyne_sample,
    homodyne_samples,
    effect_outside_prob,
    outside_indicators,
)

__all__ = [
    'GaussianModState',
    'ChannelModel',
    'Lossless',
    'BeamSplitter',
    'NoisyGaussian',
    'InterceptResend',
    'propagate',
    'parse_channel',
    'QUADRATURES',
    'HomodyneOutcome',
    'homodyne_sample',
    'homodyne_samples',
    'effect_outside_prob',
    'outside_indicators',
]

__version__ = "1.0.0"

import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())
