"""
운동량에 의존하는 편광 기하를 계산하는 모듈입니다.

헬리시티 기저 (ε⁺, ε⁻, ε^l) 는 R(k̂) = R_z(φ)·R_y(θ) 로 ẑ 축의 원편광 기저를
k̂ 방향으로 회전시켜 얻습니다. 내적은 왼쪽 인자에 대해 반선형이며, 계수는
x_s = ⟨ε^s, x̂⟩ 로 정의되므로 실벡터는 켤레 없이
x̂ = x₊ε⁺ + x₋ε⁻ + x_l ε^l 로 재구성됩니다.

모든 커널(`*_arrays`)은 θ, φ 배열을 받아 마지막 축에 성분을 붙여 반환하고,
스칼라 연산은 그 위의 얇은 래퍼입니다.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt

from ..exceptions import DegenerateDirectionError
from .kinematics import SphericalDirection

logger = logging.getLogger(__name__)

SQRT_HALF = np.sqrt(0.5)
DEGENERATE_TOL = 1e-30

# 계수 열벡터의 순서: (+, -, l)
PLUS, MINUS, LONG = 0, 1, 2

# ---------------------------------------------------------------------------
# 배열 커널
# ---------------------------------------------------------------------------

def rotation_arrays(theta: npt.ArrayLike, phi: npt.ArrayLike) -> np.ndarray:
    """R_z(φ)·R_y(θ), shape (..., 3, 3)"""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    zero = np.zeros_like(theta)
    return np.stack([
        np.stack([cp * ct, -sp, cp * st], axis=-1),
        np.stack([sp * ct, cp, sp * st], axis=-1),
        np.stack([-st, zero, ct], axis=-1),
    ], axis=-2)

def xy_coefficient_arrays(theta: npt.ArrayLike, phi: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """|x̂⟩, |ŷ⟩ 의 (ε⁺, ε⁻, ε^l) 계수 열벡터, 각각 shape (..., 3) complex"""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)

    x = np.empty(theta.shape + (3,), dtype=complex)
    x[..., PLUS] = SQRT_HALF * (ct * cp + 1j * sp)
    x[..., MINUS] = SQRT_HALF * (ct * cp - 1j * sp)
    x[..., LONG] = st * cp

    y = np.empty(theta.shape + (3,), dtype=complex)
    y[..., PLUS] = SQRT_HALF * (ct * sp - 1j * cp)
    y[..., MINUS] = SQRT_HALF * (ct * sp + 1j * cp)
    y[..., LONG] = st * sp
    return x, y

def hv_coefficient_arrays(theta: npt.ArrayLike, phi: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """정규화된 횡방향 계수 (cH, cV), 종방향 성분은 0.

    Raises:
        DegenerateDirectionError: [|x₊|² + |x₋|²] 또는 [|y₊|² + |y₋|²] < 1e-30
    """
    x, y = xy_coefficient_arrays(theta, phi)
    x[..., LONG] = 0.0
    y[..., LONG] = 0.0

    norm_x = np.sum(np.abs(x) ** 2, axis=-1)
    norm_y = np.sum(np.abs(y) ** 2, axis=-1)
    if np.any(norm_x < DEGENERATE_TOL) or np.any(norm_y < DEGENERATE_TOL):
        bad = np.argwhere(np.atleast_1d((norm_x < DEGENERATE_TOL) | (norm_y < DEGENERATE_TOL)))
        raise DegenerateDirectionError(
            f"ê_x/ê_y 정규화 분모가 0입니다 (x̂ 또는 ŷ 가 k̂ 에 평행): 인덱스 {bad[:3].tolist()}"
        )

    return x / np.sqrt(norm_x)[..., None], y / np.sqrt(norm_y)[..., None]

def projector_arrays(theta: npt.ArrayLike,
                     phi: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """M_ab = col(a)·col(b)†, 각각 shape (..., 3, 3)"""
    x, y = xy_coefficient_arrays(theta, phi)
    xc, yc = np.conj(x), np.conj(y)
    m_xx = x[..., :, None] * xc[..., None, :]
    m_xy = x[..., :, None] * yc[..., None, :]
    m_yx = y[..., :, None] * xc[..., None, :]
    m_yy = y[..., :, None] * yc[..., None, :]
    return m_xx, m_xy, m_yx, m_yy

# ---------------------------------------------------------------------------
# 값 타입과 스칼라 연산
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HelicityTriad:
    """방향 k̂ 에서의 (ε⁺, ε⁻, ε^l) 복소 3-벡터"""

    eps_plus: np.ndarray
    eps_minus: np.ndarray
    eps_long: np.ndarray

    def basis(self) -> np.ndarray:
        """행 순서 (+, -, l) 의 3×3 배열"""
        return np.stack([self.eps_plus, self.eps_minus, self.eps_long])

    def gram(self) -> np.ndarray:
        """⟨ε^a, ε^b⟩ 행렬 (단위행렬이어야 함)"""
        b = self.basis()
        return np.conj(b) @ b.T

@dataclass(frozen=True)
class TransverseCoefficients:
    x_plus: complex
    x_minus: complex
    y_plus: complex
    y_minus: complex
    x_long: float
    y_long: float

    def x_column(self) -> np.ndarray:
        return np.array([self.x_plus, self.x_minus, self.x_long], dtype=complex)

    def y_column(self) -> np.ndarray:
        return np.array([self.y_plus, self.y_minus, self.y_long], dtype=complex)

@dataclass(frozen=True)
class HVCoefficients:
    """(ε⁺, ε⁻, ε^l) 기저에서의 |ê_x⟩ (H), |ê_y⟩ (V) 계수"""

    c_h: np.ndarray
    c_v: np.ndarray

@dataclass(frozen=True)
class ProjectorMatrices:
    m_xx: np.ndarray
    m_xy: np.ndarray
    m_yx: np.ndarray
    m_yy: np.ndarray

def rotation_matrix(direction: SphericalDirection) -> np.ndarray:
    """ẑ 를 k̂ 로 보내는 회전 R(k̂) = R_z(φ)·R_y(θ)"""
    return rotation_arrays(direction.theta, direction.phi)

def helicity_triad(direction: SphericalDirection) -> HelicityTriad:
    rot = rotation_matrix(direction)
    eps_plus = SQRT_HALF * (rot[:, 0] + 1j * rot[:, 1])
    eps_minus = SQRT_HALF * (rot[:, 0] - 1j * rot[:, 1])
    return HelicityTriad(eps_plus, eps_minus, rot[:, 2].astype(complex))

def xy_coefficients(direction: SphericalDirection) -> TransverseCoefficients:
    x, y = xy_coefficient_arrays(direction.theta, direction.phi)
    return TransverseCoefficients(
        x_plus=complex(x[PLUS]), x_minus=complex(x[MINUS]),
        y_plus=complex(y[PLUS]), y_minus=complex(y[MINUS]),
        x_long=float(x[LONG].real), y_long=float(y[LONG].real),
    )

def hv_coefficients(direction: SphericalDirection) -> HVCoefficients:
    c_h, c_v = hv_coefficient_arrays(direction.theta, direction.phi)
    return HVCoefficients(c_h, c_v)

def projector_matrices(direction: SphericalDirection) -> ProjectorMatrices:
    return ProjectorMatrices(*projector_arrays(direction.theta, direction.phi))

def sigma_components(direction: SphericalDirection) -> Tuple[np.ndarray, np.ndarray]:
    """σ_φ = C·cos2φ + S·sin2φ 의 (C, S) = (M_xx - M_yy, M_xy + M_yx)"""
    p = projector_matrices(direction)
    return p.m_xx - p.m_yy, p.m_xy + p.m_yx

def sigma_matrix_3d(direction: SphericalDirection, angle: float) -> np.ndarray:
    c, s = sigma_components(direction)
    return c * np.cos(2.0 * angle) + s * np.sin(2.0 * angle)

def reconstruct_vector(coefficients: np.ndarray, triad: HelicityTriad) -> np.ndarray:
    """Σ_s c_s ε^s 로 3-벡터를 재구성합니다."""
    return np.asarray(coefficients) @ triad.basis()
