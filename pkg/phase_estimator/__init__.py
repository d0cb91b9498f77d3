"""
phase_estimator 顶级模块
功能：相干探针设计 + Gamma 反解 + 相位误差估计
"""

from .probes import (
    ProbeSet,
    ProbeDesignError,
    design_probes,
    validate_probes,
    max_probe_radius,
)
from .gamma import GammaMatrix, build_gamma, gamma_entries, condition_number
from .estimator import (
    EffectEstimate,
    PhiEstimate,
    EstimateBands,
    SingularGammaError,
    invert_for_effect,
    conditioning_ok,
    phi_estimate,
    target_weights,
    estimate_uncertainty,
    aggregate_phase_error,
    homogeneity_pvalue,
)
from .truncation import truncation_gap, truncation_bound_check
from .demo import run_estimator_demo, simulate_probe_statistics

__all__ = [
    # 探针
    'ProbeSet',
    'ProbeDesignError',
    'design_probes',
    'validate_probes',
    'max_probe_radius',

    # Gamma
    'GammaMatrix',
    'build_gamma',
    'gamma_entries',
    'condition_number',

    # 估计
    'EffectEstimate',
    'PhiEstimate',
    'EstimateBands',
    'SingularGammaError',
    'invert_for_effect',
    'conditioning_ok',
    'phi_estimate',
    'target_weights',
    'estimate_uncertainty',
    'aggregate_phase_error',
    'homogeneity_pvalue',

    # 截断 / 演示
    'truncation_gap',
    'truncation_bound_check',
    'run_estimator_demo',
    'simulate_probe_statistics',
]

__version__ = "1.0.0"

import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())
logger.debug(f"📦 phase_estimator v{__version__} 已加载")
