"""
횡방향 가우시안 운동량 분포를 다루는 모듈입니다.

|f_p(k)|² 의 δ(k_z - p_z) 는 해석적으로 적분되어 사라지므로, 모든 운동량 적분은
지지점 (r, φ) 위의 2차원 극좌표 적분이 되고 k_z 는 광자 A 에서 +1, B 에서 -1 로
고정됩니다. 광자별 횡방향 정규화 ∫ ρ_W(r) r dr dφ = 1 을 사용합니다.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import numpy.typing as npt

from ..exceptions import PcatDomainError
from ..validators import PcatValidator
from .kinematics import ThreeMomentum

DIRECTION_SIGN = {'A': 1.0, 'B': -1.0}

@dataclass(frozen=True)
class SupportPoint:
    """δ 로 축약된 분포의 지지점 (k_r = r, 방위각 φ)"""

    r: float
    phi: float = 0.0

@dataclass(frozen=True)
class GaussianPacket:
    """정규화된 폭 W = w/|p| 의 횡방향 가우시안 파동 묶음

    Attributes:
        width: W (> 0)
        particle: 'A' (+z 진행) 또는 'B' (-z 진행)
    """

    width: float
    particle: str = 'A'

    def __post_init__(self) -> None:
        object.__setattr__(self, 'width', PcatValidator.validate_width(self.width, allow_zero=False))
        object.__setattr__(self, 'particle', PcatValidator.validate_particle(self.particle))

    @property
    def sign(self) -> float:
        return DIRECTION_SIGN[self.particle]

    def weight(self, r: npt.ArrayLike) -> Union[float, np.ndarray]:
        """ρ_W(r) = π⁻¹ W⁻² exp(-(r/W)²)

        Raises:
            PcatDomainError: r < 0
        """
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < 0):
            raise PcatDomainError(f"횡방향 반지름은 0 이상이어야 합니다: {r}")
        w2 = self.width * self.width
        value = np.exp(-(r_arr * r_arr) / w2) / (math.pi * w2)
        return float(value) if value.ndim == 0 else value

    def r_max(self, r_max_in_widths: float = 8.0) -> float:
        return r_max_in_widths * self.width

    def momentum_at(self, point: SupportPoint) -> ThreeMomentum:
        return momentum_at(self, point)

    def sample_radius(self, u: npt.ArrayLike) -> np.ndarray:
        """역 누적분포 r = W·√(-ln u), u ∈ (0, 1]"""
        return self.width * np.sqrt(-np.log(np.asarray(u, dtype=float)))

    def mean_radius(self) -> float:
        """⟨r⟩ = W·√π/2"""
        return self.width * math.sqrt(math.pi) / 2.0

    def second_moment(self) -> float:
        """⟨r²⟩ = W²"""
        return self.width * self.width

def weight(packet: GaussianPacket, r: npt.ArrayLike) -> Union[float, np.ndarray]:
    return packet.weight(r)

def momentum_at(packet: GaussianPacket, point: SupportPoint) -> ThreeMomentum:
    """지지점을 3-운동량 (r cosφ, r sinφ, ±1) 로 만듭니다."""
    return ThreeMomentum(
        point.r * math.cos(point.phi),
        point.r * math.sin(point.phi),
        packet.sign,
    )
