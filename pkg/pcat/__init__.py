"""
pcat - Polarization Correlation Analysis Tool

움직이는 검출기로 관측한 얽힌 광자쌍의 편광 상관과 CHSH 함수를 계산합니다.
"""

__version__ = "1.0.0"

from .core.config_manager import ConfigManager
from .correlator import (
    chsh_curve,
    chsh_F,
    delta_F_curve,
    effective_width,
    ideal_F,
    single_photon_transfer,
    transfer_pair,
)
from .exceptions import (
    CancellationError,
    ConsistencyError,
    ConvergenceError,
    DegenerateDirectionError,
    PcatConfigurationError,
    PcatDomainError,
    PcatError,
    QuadratureError,
)
from .numerics import QuadratureSpec, integrate_polar
from .oracle import mc_transfer, simulate_bell_run
from .physics import GaussianPacket, ZBoost, rapidity_from_velocity

__all__ = [
    '__version__',
    'ConfigManager',
    'chsh_curve', 'chsh_F', 'delta_F_curve', 'effective_width', 'ideal_F',
    'single_photon_transfer', 'transfer_pair',
    'CancellationError', 'ConsistencyError', 'ConvergenceError', 'DegenerateDirectionError',
    'PcatConfigurationError', 'PcatDomainError', 'PcatError', 'QuadratureError',
    'QuadratureSpec', 'integrate_polar',
    'mc_transfer', 'simulate_bell_run',
    'GaussianPacket', 'ZBoost', 'rapidity_from_velocity',
]
