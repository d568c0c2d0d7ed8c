"""
이상 극한(W = 0) Bell 실험의 유한 N 시뮬레이션 모듈입니다.

각 광자쌍의 결과 (s_A, s_B) ∈ {±1}² 는 Pr(s_A, s_B) = (1 + s_A·s_B·cos2Δ)/4
(Δ = φ - ϖ) 를 따르며, 상관 함수는 경험 평균 (1/N) Σ s_A·s_B 로 추정합니다.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import norm

from ..validators import PcatValidator

logger = logging.getLogger(__name__)

OUTCOMES: Tuple[Tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

def outcome_probabilities(delta: float) -> np.ndarray:
    """OUTCOMES 순서의 결합 확률"""
    c = math.cos(2.0 * delta)
    probs = np.array([(1.0 + sa * sb * c) / 4.0 for sa, sb in OUTCOMES])
    # 반올림으로 생긴 음수 제거
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()

def _z_score(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise ValueError(f"신뢰수준은 (0, 1) 범위여야 합니다: {level}")
    return float(norm.ppf(0.5 + level / 2.0))

@dataclass(frozen=True)
class FiniteRun:
    """한 측정 각도 쌍 (φ, ϖ) 에 대한 N 쌍의 결과"""

    N: int
    angle_pair: Tuple[float, float]
    counts: Dict[Tuple[int, int], int]
    seed: int

    @property
    def delta(self) -> float:
        return self.angle_pair[0] - self.angle_pair[1]

    @property
    def E_hat(self) -> float:
        total = sum(sa * sb * n for (sa, sb), n in self.counts.items())
        return total / self.N

    @property
    def expected(self) -> float:
        return math.cos(2.0 * self.delta)

    def std_error(self) -> float:
        """이항 표준 오차 √((1 - E²)/N) (E 는 경험값)"""
        return math.sqrt(max(1.0 - self.E_hat ** 2, 0.0) / self.N)

    def confidence(self, level: float = 0.95) -> Tuple[float, float]:
        half = _z_score(level) * self.std_error()
        return self.E_hat - half, self.E_hat + half

@dataclass(frozen=True)
class BellRun:
    """CHSH 네 각도 쌍의 FiniteRun 묶음

    runs 순서: (0, 0), (0, -ϑ), (ϑ, 0), (ϑ, -ϑ)
    """

    theta: float
    runs: List[FiniteRun]
    seed: int

    @property
    def N(self) -> int:
        return self.runs[0].N

    @property
    def chsh_sum(self) -> float:
        e_00, e_0m, e_p0, e_pm = (run.E_hat for run in self.runs)
        return abs(e_00 + e_0m + e_p0 - e_pm)

    @property
    def expected_sum(self) -> float:
        e_00, e_0m, e_p0, e_pm = (run.expected for run in self.runs)
        return abs(e_00 + e_0m + e_p0 - e_pm)

    def std_error(self) -> float:
        """네 실행이 독립이므로 분산을 더합니다."""
        return math.sqrt(sum(run.std_error() ** 2 for run in self.runs))

    def confidence(self, level: float = 0.95) -> Tuple[float, float]:
        half = _z_score(level) * self.std_error()
        return self.chsh_sum - half, self.chsh_sum + half

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for run in self.runs:
            row = {
                'phi_a': run.angle_pair[0],
                'phi_b': run.angle_pair[1],
                'N': run.N,
            }
            for sa, sb in OUTCOMES:
                row[f"n_{'p' if sa > 0 else 'm'}{'p' if sb > 0 else 'm'}"] = run.counts[(sa, sb)]
            row.update({'E_hat': run.E_hat, 'E_exact': run.expected, 'std_error': run.std_error()})
            rows.append(row)
        return pd.DataFrame(rows)

def simulate_pair(angle_pair: Tuple[float, float], N: int,
                  seed: Union[int, np.random.SeedSequence]) -> FiniteRun:
    """한 각도 쌍에 대해 N 쌍의 결과를 다항 분포로 뽑습니다.

    seed 는 정수 또는 numpy SeedSequence 입니다.
    """
    N = PcatValidator.validate_positive_int(N, "N")
    phi_a = PcatValidator.validate_finite(angle_pair[0], "phi_a")
    phi_b = PcatValidator.validate_finite(angle_pair[1], "phi_b")

    rng = np.random.Generator(np.random.PCG64(seed))
    counts = rng.multinomial(N, outcome_probabilities(phi_a - phi_b))
    entropy = seed.entropy if isinstance(seed, np.random.SeedSequence) else int(seed)
    return FiniteRun(N, (phi_a, phi_b), {o: int(n) for o, n in zip(OUTCOMES, counts)}, entropy)

def simulate_bell_run(theta: float, N: int, seed: int = 7) -> BellRun:
    """ϑ 에서 CHSH 네 각도 쌍의 유한 N 실험

    Args:
        theta: 측정 각도 ϑ (A: {0, ϑ}, B: {0, -ϑ})
        N: 각도 쌍당 광자쌍 수 (≥ 1)
        seed: 기본 시드. 같은 시드는 비트 단위로 같은 결과를 줍니다.
    """
    theta = PcatValidator.validate_finite(theta, "theta")
    N = PcatValidator.validate_positive_int(N, "N")
    children = np.random.SeedSequence(int(seed)).spawn(4)

    pairs = [(0.0, 0.0), (0.0, -theta), (theta, 0.0), (theta, -theta)]
    runs = [simulate_pair(pair, N, child) for pair, child in zip(pairs, children)]
    run = BellRun(theta, runs, int(seed))
    logger.info(f"Bell 실험 시뮬레이션: ϑ={theta}, N={N}, seed={seed}, CHSH={run.chsh_sum:.6f}")
    return run
