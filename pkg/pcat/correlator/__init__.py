"""
전달 행렬과 CHSH 상관 함수를 계산하는 패키지입니다.
"""

from .chsh import (
    TSIRELSON,
    CHSHCurve,
    CHSHPoint,
    DeltaFCurve,
    EffectiveWidth,
    SigmaMatrix,
    chsh_curve,
    chsh_F,
    chsh_point,
    correlation,
    delta_F_curve,
    effective_width,
    ideal_F,
    sigma_matrix,
)
from .transfer import (
    TransferMatrices,
    TransferPair,
    assert_state_normalized,
    plane_wave_transfer,
    single_photon_transfer,
    state_norms,
    state_overlap_HV,
    transfer_integrand,
    transfer_pair,
    transfer_pairs_for,
)

__all__ = [
    'TSIRELSON', 'CHSHCurve', 'CHSHPoint', 'DeltaFCurve', 'EffectiveWidth', 'SigmaMatrix',
    'chsh_curve', 'chsh_F', 'chsh_point', 'correlation', 'delta_F_curve',
    'effective_width', 'ideal_F', 'sigma_matrix',
    'TransferMatrices', 'TransferPair', 'assert_state_normalized', 'plane_wave_transfer',
    'single_photon_transfer', 'state_norms', 'state_overlap_HV', 'transfer_integrand',
    'transfer_pair', 'transfer_pairs_for',
]
