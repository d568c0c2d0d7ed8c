"""
전달 행렬로부터 상관 함수와 CHSH 함수 F(ϑ) 를 조립하는 모듈입니다.

상태는 |ψ'⟩ = (|H'_A⟩⊗|H_B⟩ + |V'_A⟩⊗|V_B⟩)/√2 이고 측정 각도는
A: {0, +ϑ}, B: {0, -ϑ} 입니다.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy.optimize import brentq

from ..exceptions import CancellationError, ConsistencyError, PcatDomainError
from ..numerics.quadrature import QuadratureSpec
from ..validators import PcatValidator
from .transfer import TransferMatrices, TransferPair, transfer_pair

logger = logging.getLogger(__name__)

IMAG_TOL = 1e-10
BOUND_TOL = 1e-10
TSIRELSON = 2.0 * math.sqrt(2.0)

@dataclass(frozen=True)
class SigmaMatrix:
    """{H, V} 부분공간으로 제한한 σ_φ"""

    matrix: np.ndarray
    angle: float
    est_error: float = 0.0

def sigma_matrix(transfer: TransferMatrices, angle: float) -> SigmaMatrix:
    """S(φ) = (G_xx - G_yy)·cos2φ + (G_xy + G_yx)·sin2φ"""
    c, s = math.cos(2.0 * angle), math.sin(2.0 * angle)
    matrix = (transfer.g_xx - transfer.g_yy) * c + (transfer.g_xy + transfer.g_yx) * s
    # 원소별 오차 상한
    error = 2.0 * transfer.est_error * (abs(c) + abs(s))
    return SigmaMatrix(matrix, angle, error)

def correlation(sigma_a: SigmaMatrix, sigma_b: SigmaMatrix) -> float:
    """E = ½ Σ_{P,Q} S_A[P,Q]·S_B[P,Q]

    Raises:
        ConsistencyError: 허수부 > 1e-10 (기저 규약 오류) 또는 |E| > 1 + 1e-10
    """
    value = 0.5 * np.sum(sigma_a.matrix * sigma_b.matrix)
    if abs(value.imag) > IMAG_TOL:
        raise ConsistencyError(
            f"상관 함수 허수부가 너무 큽니다: {value.imag:.3e} (φ={sigma_a.angle}, ϖ={sigma_b.angle})"
        )
    if abs(value.real) > 1.0 + BOUND_TOL:
        raise ConsistencyError(f"|E| > 1: {value.real!r} (φ={sigma_a.angle}, ϖ={sigma_b.angle})")
    return float(value.real)

def _correlation_error(sigma_a: SigmaMatrix, sigma_b: SigmaMatrix) -> float:
    # 원소 크기 ≤ 1 을 이용한 상한, 4개 원소 × ½
    ea, eb = sigma_a.est_error, sigma_b.est_error
    return 2.0 * (ea + eb + ea * eb)

@dataclass(frozen=True)
class CHSHPoint:
    theta: float
    F: float
    e_00: float
    e_0m: float
    e_p0: float
    e_pm: float
    est_error: float = 0.0

    @property
    def components(self) -> Tuple[float, float, float, float]:
        """(E(â₂,b̂₁), E(â₂,b̂₂), E(â₁,b̂₁), E(â₁,b̂₂))"""
        return self.e_00, self.e_0m, self.e_p0, self.e_pm

def chsh_point(theta: float, pair: TransferPair) -> CHSHPoint:
    """전달 행렬 쌍으로 한 ϑ 에서의 F 를 조립합니다."""
    a0, ap = sigma_matrix(pair.a, 0.0), sigma_matrix(pair.a, theta)
    b0, bm = sigma_matrix(pair.b, 0.0), sigma_matrix(pair.b, -theta)

    terms = [(a0, b0), (a0, bm), (ap, b0), (ap, bm)]
    e_00, e_0m, e_p0, e_pm = (correlation(sa, sb) for sa, sb in terms)
    error = sum(_correlation_error(sa, sb) for sa, sb in terms)

    return CHSHPoint(theta, abs(e_00 + e_0m + e_p0 - e_pm), e_00, e_0m, e_p0, e_pm, error)

def ideal_F(theta: npt.ArrayLike) -> np.ndarray:
    """평면파 극한의 닫힌 형태 |1 + 2cos2ϑ - cos4ϑ|"""
    t = np.asarray(theta, dtype=float)
    return np.abs(1.0 + 2.0 * np.cos(2.0 * t) - np.cos(4.0 * t))

def chsh_F(theta: float, alpha: float, width: float, spec: Optional[QuadratureSpec] = None) -> CHSHPoint:
    theta = PcatValidator.validate_finite(theta, "theta")
    return chsh_point(theta, transfer_pair(alpha, width, spec))

@dataclass(frozen=True)
class CHSHCurve:
    points: List[CHSHPoint]
    alpha: float
    width: float
    spec: Optional[QuadratureSpec] = None
    converged: bool = True

    @property
    def theta(self) -> np.ndarray:
        return np.array([p.theta for p in self.points])

    @property
    def F(self) -> np.ndarray:
        return np.array([p.F for p in self.points])

    @property
    def est_error(self) -> np.ndarray:
        return np.array([p.est_error for p in self.points])

    def max_est_error(self) -> float:
        return float(self.est_error.max()) if self.points else 0.0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'theta_rad': self.theta,
            'F': self.F,
            'E_00': [p.e_00 for p in self.points],
            'E_0m': [p.e_0m for p in self.points],
            'E_p0': [p.e_p0 for p in self.points],
            'E_pm': [p.e_pm for p in self.points],
            'est_error': self.est_error,
        })

def chsh_curve(theta_grid: Sequence[float], alpha: float, width: float,
               spec: Optional[QuadratureSpec] = None, pair: Optional[TransferPair] = None,
               require_convergence: bool = False) -> CHSHCurve:
    """ϑ 격자 위의 F(ϑ). 전달 행렬은 한 번만 계산해 모든 ϑ 에 재사용합니다."""
    grid = PcatValidator.validate_theta_grid(theta_grid)
    if pair is None:
        pair = transfer_pair(alpha, width, spec, require_convergence)
    points = [chsh_point(float(theta), pair) for theta in grid]
    return CHSHCurve(points, float(alpha), float(width), spec, pair.converged)

@dataclass(frozen=True)
class DeltaFCurve:
    """ΔF(ϑ) = F(ϑ; α, W) - F(ϑ; 0, W) 와 두 부모 곡선"""

    boosted: CHSHCurve
    rest: CHSHCurve

    @property
    def theta(self) -> np.ndarray:
        return self.boosted.theta

    @property
    def delta(self) -> np.ndarray:
        return self.boosted.F - self.rest.F

    def max_est_error(self) -> float:
        return max(self.boosted.max_est_error(), self.rest.max_est_error())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'theta_rad': self.theta,
            'delta_F': self.delta,
            'F': self.boosted.F,
            'F0': self.rest.F,
            'est_error_F': self.boosted.est_error,
            'est_error_F0': self.rest.est_error,
        })

def delta_F_curve(theta_grid: Sequence[float], alpha: float, width: float,
                  spec: Optional[QuadratureSpec] = None, guard_fraction: float = 0.1) -> DeltaFCurve:
    """움직이는 검출기와 정지 검출기의 F 차이를 계산합니다.

    두 계산 모두 수렴(est_error ≤ target_tol)해야 하며, 어느 쪽이든 est_error 가
    guard_fraction·max|ΔF| 를 넘으면 상쇄 오차 때문에 결과를 내지 않습니다.

    Raises:
        ConvergenceError: 적분이 수렴하지 않은 경우
        CancellationError: 상쇄 가드에 걸린 경우
    """
    alpha = PcatValidator.validate_finite(alpha, "alpha")
    rest = chsh_curve(theta_grid, 0.0, width, spec, require_convergence=True)

    if alpha == 0.0:
        return DeltaFCurve(rest, rest)

    boosted = chsh_curve(theta_grid, alpha, width, spec, require_convergence=True)
    curve = DeltaFCurve(boosted, rest)

    max_delta = float(np.max(np.abs(curve.delta)))
    max_error = curve.max_est_error()
    if max_error > guard_fraction * max_delta:
        raise CancellationError(
            f"ΔF 상쇄 가드: est_error={max_error:.3e} > {guard_fraction}·max|ΔF|={guard_fraction * max_delta:.3e} "
            f"(α={alpha}, W={width})"
        )

    logger.info(f"ΔF 계산 완료: α={alpha}, W={width}, max|ΔF|={max_delta:.3e}, est_error={max_error:.3e}")
    return curve

@dataclass(frozen=True)
class EffectiveWidth:
    """F(ϑ; W_eff, 0) = F(ϑ; W, α) 를 만족하는 W_eff"""

    alpha: float
    width: float
    theta: float
    width_eff: float
    target_F: float
    iterations: int

def effective_width(alpha: float, width: float, theta: float = math.pi / 6,
                    spec: Optional[QuadratureSpec] = None, width_limit: float = 50.0,
                    xtol: float = 1e-12) -> EffectiveWidth:
    """정지 검출기에서 같은 F(ϑ) 를 주는 폭 W_eff 를 구합니다.

    F 는 W 에 대해 감소하므로 [0, W_hi] 를 두 배씩 넓혀 근을 감싼 뒤 brentq 로 풉니다.

    Raises:
        PcatDomainError: width_limit 안에서 근을 감쌀 수 없는 경우
    """
    alpha = PcatValidator.validate_finite(alpha, "alpha")
    width = PcatValidator.validate_width(width)
    target = chsh_F(theta, alpha, width, spec).F

    def mismatch(w: float) -> float:
        return chsh_F(theta, 0.0, w, spec).F - target

    if mismatch(0.0) <= 0.0:
        return EffectiveWidth(alpha, width, theta, 0.0, target, 0)

    hi = max(width, 0.1)
    while mismatch(hi) > 0.0:
        hi *= 2.0
        if hi > width_limit:
            raise PcatDomainError(
                f"W ≤ {width_limit} 에서 F={target:.6f} 를 주는 유효 폭이 없습니다 (α={alpha}, W={width})"
            )

    w_eff, info = brentq(mismatch, 0.0, hi, xtol=xtol, full_output=True)
    logger.info(f"유효 폭: α={alpha}, W={width} → W_eff={w_eff:.6g} ({info.iterations}회 반복)")
    return EffectiveWidth(alpha, width, theta, float(w_eff), target, int(info.iterations))
