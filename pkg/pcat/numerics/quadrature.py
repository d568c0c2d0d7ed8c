"""
가우시안 횡방향 가중치에 대한 2차원 극좌표 적분 모듈입니다.

반지름 방향은 (0, R_max] 로 사상한 Gauss-Legendre, 방위각 방향은 주기 사다리꼴
규칙을 사용합니다. 두 규칙 모두 매끄러운 피적분함수에서 스펙트럼 수렴하므로,
오차는 두 노드 수를 모두 배가한 결과와의 차이로 추정합니다.
"""

import functools
import logging
from dataclasses import asdict, dataclass, replace
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from ..exceptions import PcatConfigurationError, QuadratureError
from ..physics.wavepacket import GaussianPacket
from ..validators import PcatValidator

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]

EPS = float(np.finfo(float).eps)

@dataclass(frozen=True)
class QuadratureSpec:
    """극좌표 적분 설정

    Attributes:
        n_radial: 반지름 Gauss-Legendre 노드 수
        n_azimuthal: 방위각 등간격 노드 수
        r_max_in_widths: 절단 반지름 (W 단위)
        target_tol: 배가 오차 목표
        max_doublings: 비수렴 판정 전 최대 배가 횟수
    """

    n_radial: int = 64
    n_azimuthal: int = 64
    r_max_in_widths: float = 8.0
    target_tol: float = 1e-13
    max_doublings: int = 2

    def __post_init__(self) -> None:
        PcatValidator.validate_positive_int(self.n_radial, "n_radial")
        PcatValidator.validate_positive_int(self.n_azimuthal, "n_azimuthal")
        PcatValidator.validate_positive_int(self.max_doublings, "max_doublings", minimum=1)
        if PcatValidator.validate_finite(self.r_max_in_widths, "r_max_in_widths") <= 0:
            raise PcatConfigurationError(f"r_max_in_widths는 0보다 커야 합니다: {self.r_max_in_widths}")
        if PcatValidator.validate_finite(self.target_tol, "target_tol") <= 0:
            raise PcatConfigurationError(f"target_tol은 0보다 커야 합니다: {self.target_tol}")

    def doubled(self) -> 'QuadratureSpec':
        return replace(self, n_radial=2 * self.n_radial, n_azimuthal=2 * self.n_azimuthal)

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_config(cls, config: Any) -> 'QuadratureSpec':
        """ConfigManager 의 quadrature 섹션으로 생성"""
        return cls(
            n_radial=int(config.get('quadrature.radial_nodes', 64)),
            n_azimuthal=int(config.get('quadrature.azimuthal_nodes', 64)),
            r_max_in_widths=float(config.get('quadrature.r_max_in_widths', 8.0)),
            target_tol=float(config.get('quadrature.target_tol', 1e-13)),
            max_doublings=int(config.get('quadrature.max_doublings', 2)),
        )

@dataclass(frozen=True)
class IntegralResult:
    """적분 결과

    value 는 스칼라 또는 피적분함수의 추가 축을 가진 배열이고, est_error 는
    직전 배가 단계와의 최대 절대 차이입니다.
    """

    value: Any
    est_error: float
    nodes_used: Tuple[int, int]
    converged: bool = True

@functools.lru_cache(maxsize=32)
def _gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)

def polar_nodes(packet: GaussianPacket, n_radial: int, n_azimuthal: int,
                r_max_in_widths: float = 8.0) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(r, φ) 격자와 가중치를 만듭니다.

    Returns:
        (r, φ, weights), 각각 shape (n_radial, n_azimuthal).
        weights 에는 ρ_W(r)·r·(GL 가중치)·2π/n_azimuthal 이 모두 들어 있습니다.
    """
    x, w = _gauss_legendre(n_radial)
    half = 0.5 * packet.r_max(r_max_in_widths)
    r = half * (x + 1.0)
    w_r = half * w * packet.weight(r) * r

    phi = 2.0 * np.pi * np.arange(n_azimuthal) / n_azimuthal
    w_phi = 2.0 * np.pi / n_azimuthal

    r_grid, phi_grid = np.meshgrid(r, phi, indexing='ij')
    weights = np.outer(w_r, np.full(n_azimuthal, w_phi))
    return r_grid, phi_grid, weights

def summation_floor(magnitude: np.ndarray, n_radial: int, n_azimuthal: int) -> float:
    """두 단계 합산의 최악 반올림 오차 (n_r + n_φ)·ε·Σ|w·f| (성분별 최대)"""
    return float((n_radial + n_azimuthal) * EPS * np.max(magnitude))

def _evaluate(f: Integrand, packet: GaussianPacket, n_radial: int, n_azimuthal: int,
              r_max_in_widths: float) -> Tuple[np.ndarray, np.ndarray]:
    r, phi, weights = polar_nodes(packet, n_radial, n_azimuthal, r_max_in_widths)
    values = np.asarray(f(r, phi))

    if values.shape[:2] != r.shape:
        raise QuadratureError(
            f"피적분함수 반환 shape {values.shape} 가 노드 격자 {r.shape} 와 맞지 않습니다"
        )

    finite = np.isfinite(values)
    if not np.all(finite):
        i, j = np.argwhere(~finite)[0][:2]
        raise QuadratureError(
            f"피적분함수가 유한하지 않은 값을 반환했습니다: r={r[i, j]!r}, φ={phi[i, j]!r} "
            f"(W={packet.width}, particle={packet.particle})"
        )

    # φ 축, r 축 순서의 두 단계 합산 (순서 고정)
    weighted = weights.reshape(weights.shape + (1,) * (values.ndim - 2)) * values
    total = weighted.sum(axis=1).sum(axis=0)
    magnitude = np.abs(weighted).sum(axis=1).sum(axis=0)
    return total, magnitude

def integrate_polar(f: Integrand, packet: GaussianPacket,
                    spec: Optional[QuadratureSpec] = None) -> IntegralResult:
    """∫ d²q ρ_W(q_r) f(q_r, φ) 를 계산합니다.

    노드 수를 두 배씩 늘려가며 직전 단계와의 차이가 허용 오차 이하가 되면
    수렴으로 봅니다. 허용 오차는 target_tol 과 두 합산의 반올림 한계 중 큰 값입니다.
    max_doublings 번 배가한 후에도 수렴하지 않으면 converged=False 로 표시하고
    마지막 값을 반환합니다 (중단 여부는 호출자 결정).

    Raises:
        QuadratureError: 피적분함수가 NaN/inf 를 반환한 경우
    """
    spec = spec or QuadratureSpec()
    n_r, n_phi = spec.n_radial, spec.n_azimuthal

    previous, previous_magnitude = _evaluate(f, packet, n_r, n_phi, spec.r_max_in_widths)
    est_error = float('inf')
    tolerance = spec.target_tol

    for _ in range(spec.max_doublings):
        floor_previous = summation_floor(previous_magnitude, n_r, n_phi)
        n_r, n_phi = 2 * n_r, 2 * n_phi
        current, magnitude = _evaluate(f, packet, n_r, n_phi, spec.r_max_in_widths)
        est_error = float(np.max(np.abs(current - previous)))
        tolerance = max(spec.target_tol, floor_previous + summation_floor(magnitude, n_r, n_phi))
        previous, previous_magnitude = current, magnitude
        if est_error <= tolerance:
            logger.debug(f"적분 수렴: nodes=({n_r}, {n_phi}), est_error={est_error:.3e}, tol={tolerance:.1e}")
            return IntegralResult(current, est_error, (n_r, n_phi), True)

    logger.warning(
        f"적분 비수렴: nodes=({n_r}, {n_phi}), est_error={est_error:.3e} > tol={tolerance:.1e}"
    )
    return IntegralResult(previous, est_error, (n_r, n_phi), False)
