"""
질량 없는 광자의 운동학과 z축 방향 로렌츠 부스트를 다루는 모듈입니다.

모든 운동량은 중심 운동량 |p| 단위로 표현합니다 (|p| = 1, ħ = c = 1).
부스트 파라미터는 α ≡ -tanh⁻¹ v 규약을 따르므로, 검출기가 광자 A와 같은
+z 방향으로 멀어지면 (v > 0) α < 0 이 되고 광자는 적색편이됩니다.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt

from ..exceptions import ConsistencyError, PcatDomainError
from ..validators import PcatValidator

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 299_792_458.0  # m/s
MEASURE_RATIO_TOL = 1e-13

def boost_components(alpha: float, kx: npt.ArrayLike, ky: npt.ArrayLike,
                     kz: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Λ_Z·(‖k‖, k) 를 배열 단위로 계산합니다.

    광원뿔 성분 k± = k⁰ ± k_z 가 e^{±α} 배가 되는 형태로 계산합니다. 축 근처에서
    작은 쪽 성분은 k_r²/(k⁰ + |k_z|) 로 구하므로 큰 |α| 에서도 상쇄 오차가 없습니다.

    Returns:
        (kx', ky', kz', k'⁰) 튜플. 횡방향 성분은 변하지 않습니다.
    """
    x, y, z = (np.asarray(c, dtype=float) for c in (kx, ky, kz))
    kr2 = x * x + y * y
    big = np.sqrt(kr2 + z * z) + np.abs(z)
    small = np.divide(kr2, big, out=np.zeros_like(big), where=big > 0)
    plus = np.where(z >= 0, big, small)
    minus = np.where(z >= 0, small, big)

    grow, shrink = math.exp(alpha), math.exp(-alpha)
    kz_new = 0.5 * (grow * plus - shrink * minus)
    energy_new = 0.5 * (grow * plus + shrink * minus)
    return x, y, kz_new, energy_new

def spherical_angles(kx: npt.ArrayLike, ky: npt.ArrayLike, kz: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """운동량 성분에서 (θ, φ) 를 구합니다.

    θ는 atan2(k_r, k_z)로 구해 작은 극각에서도 정밀도를 유지하고,
    φ는 [0, 2π) 로 맞춥니다.
    """
    x, y, z = (np.asarray(c, dtype=float) for c in (kx, ky, kz))
    theta = np.arctan2(np.hypot(x, y), z)
    phi = np.mod(np.arctan2(y, x), 2.0 * np.pi)
    return theta, phi

@dataclass(frozen=True)
class SphericalDirection:
    """단위 방향 벡터의 구면 좌표 (θ ∈ [0, π], φ ∈ [0, 2π))"""

    theta: float
    phi: float = 0.0

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    @classmethod
    def from_vector(cls, vector: npt.ArrayLike) -> 'SphericalDirection':
        kx, ky, kz = (float(c) for c in np.asarray(vector, dtype=float))
        if kx == 0.0 and ky == 0.0 and kz == 0.0:
            raise PcatDomainError("영벡터는 방향을 정의할 수 없습니다")
        theta, phi = spherical_angles(kx, ky, kz)
        return cls(float(theta), float(phi))

@dataclass(frozen=True)
class ThreeMomentum:
    """질량 없는 광자의 3-운동량 (|p| 단위). 에너지는 k⁰ = ‖k‖ 입니다."""

    kx: float
    ky: float
    kz: float

    def energy(self) -> float:
        return math.sqrt(self.kx * self.kx + self.ky * self.ky + self.kz * self.kz)

    def as_array(self) -> np.ndarray:
        return np.array([self.kx, self.ky, self.kz])

    def direction(self) -> SphericalDirection:
        """k̂ 의 구면 좌표. 영벡터이면 PcatDomainError."""
        return SphericalDirection.from_vector(self.as_array())

@dataclass(frozen=True)
class ZBoost:
    """z축 방향 로렌츠 부스트 Λ_Z (rapidity α)"""

    alpha: float = 0.0

    @property
    def velocity(self) -> float:
        return velocity_from_rapidity(self.alpha)

    def compose(self, other: 'ZBoost') -> 'ZBoost':
        return ZBoost(self.alpha + other.alpha)

    def inverse(self) -> 'ZBoost':
        return ZBoost(-self.alpha)

    def matrix(self) -> np.ndarray:
        """(t, x, y, z) 순서의 4×4 Λ_Z 행렬"""
        ch, sh = math.cosh(self.alpha), math.sinh(self.alpha)
        return np.array([
            [ch, 0.0, 0.0, sh],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [sh, 0.0, 0.0, ch],
        ])

    def apply(self, k: ThreeMomentum) -> ThreeMomentum:
        return apply_boost(self, k)

def rapidity_from_velocity(velocity: float) -> float:
    """검출기 속도 v (광속 단위) 에서 α = -tanh⁻¹ v 를 구합니다.

    Raises:
        PcatDomainError: |v| >= 1 인 경우
    """
    velocity = PcatValidator.validate_velocity(velocity)
    return -math.atanh(velocity)

def velocity_from_rapidity(alpha: float) -> float:
    return -math.tanh(alpha)

def apply_boost(boost: ZBoost, k: ThreeMomentum) -> ThreeMomentum:
    """Λ_Z·(‖k‖, k) 의 공간 성분을 반환합니다."""
    kx, ky, kz, _ = boost_components(boost.alpha, k.kx, k.ky, k.kz)
    return ThreeMomentum(float(kx), float(ky), float(kz))

def boosted_energy(boost: ZBoost, k: ThreeMomentum) -> float:
    """k'⁰ = cosh α ‖k‖ + sinh α k_z"""
    return float(boost_components(boost.alpha, k.kx, k.ky, k.kz)[3])

def doppler_factor(boost: ZBoost, k: ThreeMomentum) -> float:
    """움직이는 검출기가 보는 광자 에너지 비 k'⁰/k⁰ (축 위에서는 e^α)"""
    energy = k.energy()
    if energy == 0.0:
        raise PcatDomainError("영벡터 운동량의 도플러 인자는 정의되지 않습니다")
    return boosted_energy(boost, k) / energy

def wigner_phase(boost: ZBoost, k: ThreeMomentum) -> float:
    """Wigner 위상 Θ(Λ, k).

    z축 방향 부스트만 존재하므로 항상 0 입니다. 일반 방향 부스트가
    추가되면 이 함수가 확장 지점이 됩니다.
    """
    if k.energy() == 0.0:
        raise PcatDomainError("영벡터 운동량에는 Wigner 위상이 정의되지 않습니다")
    return 0.0

def measure_jacobian_ratio(boost: ZBoost, q: ThreeMomentum) -> float:
    """(q⁰/k⁰)·∂k_z/∂q_z 를 계산합니다 (k = Λ_Z q).

    불변 측도 d³k/k⁰ = d³q/q⁰ 때문에 이 값은 항상 1 입니다. 진폭의
    √(q⁰/k⁰) 인자 두 개와 야코비안이 정확히 상쇄됨을 보이는 표본점 검사에 씁니다.
    """
    q0 = q.energy()
    if q0 == 0.0:
        raise PcatDomainError("영벡터 운동량에서는 측도 비율을 계산할 수 없습니다")
    # 야코비안은 행렬 원소 형태(cosh, sinh)로, 에너지는 광원뿔 형태로 따로 계산
    ch, sh = math.cosh(boost.alpha), math.sinh(boost.alpha)
    dkz_dqz = sh * q.kz / q0 + ch
    return q0 / boosted_energy(boost, q) * dkz_dqz

def assert_measure_cancellation(boost: ZBoost, q: ThreeMomentum, tol: float = MEASURE_RATIO_TOL) -> float:
    """측도 비율이 1인지 확인하고 그 값을 반환합니다.

    허용 오차는 cosh α·q⁰/k'⁰ (행렬 원소 형태의 상쇄 조건수) 만큼 늘립니다.

    Raises:
        ConsistencyError: |ratio - 1| > tol·조건수
    """
    ratio = measure_jacobian_ratio(boost, q)
    condition = max(1.0, math.cosh(boost.alpha) * q.energy() / boosted_energy(boost, q))
    if abs(ratio - 1.0) > tol * condition:
        raise ConsistencyError(f"불변 측도 상쇄 실패: ratio={ratio!r} (α={boost.alpha}, q={q})")
    logger.debug(f"불변 측도 상쇄 확인: α={boost.alpha}, ratio-1={ratio - 1.0:.3e}")
    return ratio
