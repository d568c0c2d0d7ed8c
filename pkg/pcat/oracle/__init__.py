"""
Monte Carlo 교차 검증과 유한 N Bell 실험 시뮬레이션 패키지입니다.
"""

from .bell_run import BellRun, FiniteRun, outcome_probabilities, simulate_bell_run, simulate_pair
from .monte_carlo import McEstimate, McTransfer, compare_transfer, mc_integrate, mc_transfer, sample_moments

__all__ = [
    'BellRun', 'FiniteRun', 'outcome_probabilities', 'simulate_bell_run', 'simulate_pair',
    'McEstimate', 'McTransfer', 'compare_transfer', 'mc_integrate', 'mc_transfer', 'sample_moments',
]
