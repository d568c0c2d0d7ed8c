"""
광자 운동학, 편광 기하, 파동 묶음 모델을 제공하는 패키지입니다.
"""

from .kinematics import (
    SPEED_OF_LIGHT,
    SphericalDirection,
    ThreeMomentum,
    ZBoost,
    apply_boost,
    doppler_factor,
    measure_jacobian_ratio,
    rapidity_from_velocity,
    velocity_from_rapidity,
    wigner_phase,
)
from .polarization import (
    HelicityTriad,
    HVCoefficients,
    ProjectorMatrices,
    TransverseCoefficients,
    helicity_triad,
    hv_coefficients,
    projector_matrices,
    rotation_matrix,
    sigma_components,
    xy_coefficients,
)
from .wavepacket import GaussianPacket, SupportPoint, momentum_at

__all__ = [
    'SPEED_OF_LIGHT', 'SphericalDirection', 'ThreeMomentum', 'ZBoost',
    'apply_boost', 'doppler_factor', 'measure_jacobian_ratio',
    'rapidity_from_velocity', 'velocity_from_rapidity', 'wigner_phase',
    'HelicityTriad', 'HVCoefficients', 'ProjectorMatrices', 'TransverseCoefficients',
    'helicity_triad', 'hv_coefficients', 'projector_matrices', 'rotation_matrix',
    'sigma_components', 'xy_coefficients',
    'GaussianPacket', 'SupportPoint', 'momentum_at',
]
