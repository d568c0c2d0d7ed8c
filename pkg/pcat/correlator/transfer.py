"""
부스트된 2광자 상태를 광자별 2×2 전달 행렬로 축약하는 모듈입니다.

G_ab[P, Q] = ⟨P'| P_ab |Q'⟩  (a, b ∈ {x, y}, P, Q ∈ {H, V})

유도 과정:

1. 검출기 좌표계에서 |H'_A⟩ = ∫ d³k √(q⁰/k⁰) f_p(q) Σ_s cH_s(q) |k, ε^s_k⟩,
   q = Λ_Z⁻¹ k 이고, z축 부스트의 Wigner 위상이 0 이므로 헬리시티 라벨 s 는 유지됩니다.
2. P_ab = |â⟩⟨b̂| ⊗ I_k 는 운동량에 대각이므로
   ⟨P'|P_ab|Q'⟩ = ∫ d³k (q⁰/k⁰) |f_p(q)|² cP(q)† M_ab(k) cQ(q).
3. 불변 측도 d³k/k⁰ = d³q/q⁰ 로 변수를 바꾸면 d³k (q⁰/k⁰) = d³q 이 되어
   에너지 비 인자와 야코비안이 정확히 상쇄됩니다.
4. |f_p(q)|² 의 δ(q_z - p_z) 를 적분하면 광원 좌표계의 극좌표 적분
   ∫ d²q ρ_W(q_r) cP(q)† M_ab(Λ_Z q) cQ(q) 만 남습니다.

3 단계의 상쇄는 매 계산마다 표본점 하나에서 수치적으로 확인합니다.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from ..exceptions import ConsistencyError, ConvergenceError, PcatConfigurationError
from ..numerics.quadrature import Integrand, QuadratureSpec, integrate_polar
from ..physics.kinematics import ThreeMomentum, ZBoost, assert_measure_cancellation, boost_components, spherical_angles
from ..physics.polarization import hv_coefficient_arrays, projector_arrays
from ..physics.wavepacket import DIRECTION_SIGN, GaussianPacket
from ..validators import PcatValidator

logger = logging.getLogger(__name__)

PROJECTOR_NAMES = ('xx', 'xy', 'yx', 'yy')
STATE_LABELS = ('H', 'V')
HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12

@dataclass(frozen=True)
class TransferMatrices:
    """광자 하나의 전달 행렬 G_xx, G_xy, G_yx, G_yy 와 계산 출처"""

    g_xx: np.ndarray
    g_xy: np.ndarray
    g_yx: np.ndarray
    g_yy: np.ndarray
    particle: str
    alpha: float
    width: float
    spec: Optional[QuadratureSpec] = None
    est_error: float = 0.0
    converged: bool = True
    nodes_used: Tuple[int, int] = (0, 0)

    def as_array(self) -> np.ndarray:
        """shape (4, 2, 2), 순서 xx, xy, yx, yy"""
        return np.stack([self.g_xx, self.g_xy, self.g_yx, self.g_yy])

    def entries(self) -> Iterator[Tuple[str, complex]]:
        """('G_xy[H,V]', 값) 형태로 16개 원소를 순회합니다."""
        for name, matrix in zip(PROJECTOR_NAMES, self.as_array()):
            for i, p in enumerate(STATE_LABELS):
                for j, q in enumerate(STATE_LABELS):
                    yield f"G_{name}[{p},{q}]", complex(matrix[i, j])

    def check_invariants(self, tol: float = HERMITIAN_TOL) -> None:
        """에르미트성, G_xy† = G_yx, 고유값 범위를 확인합니다.

        Raises:
            ConsistencyError: 하나라도 위반한 경우
        """
        for name, g in (('G_xx', self.g_xx), ('G_yy', self.g_yy)):
            if np.max(np.abs(g - g.conj().T)) > tol:
                raise ConsistencyError(f"{name} 가 에르미트가 아닙니다 (particle={self.particle}, α={self.alpha}, W={self.width})")
            eigenvalues = np.linalg.eigvalsh(g)
            if eigenvalues.min() < -tol or eigenvalues.max() > 1.0 + tol:
                raise ConsistencyError(f"{name} 고유값이 [0, 1] 밖입니다: {eigenvalues}")
        if np.max(np.abs(self.g_xy.conj().T - self.g_yx)) > tol:
            raise ConsistencyError(f"G_xy† ≠ G_yx (particle={self.particle}, α={self.alpha}, W={self.width})")

def _check_particle_alpha(particle: str, alpha: float) -> Tuple[str, float]:
    particle = PcatValidator.validate_particle(particle)
    alpha = PcatValidator.validate_finite(alpha, "alpha")
    if particle == 'B' and alpha != 0.0:
        raise PcatConfigurationError("광자 B 의 검출기는 정지해 있어야 합니다 (alpha = 0)")
    return particle, alpha

def _source_momentum(particle: str, r: npt.ArrayLike,
                     phi: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    qz = np.full_like(r, DIRECTION_SIGN[particle])
    return r * np.cos(phi), r * np.sin(phi), qz

def transfer_integrand(particle: str, alpha: float) -> Integrand:
    """(r, φ) → shape (..., 4, 2, 2) 피적분함수 cP(q)† M_ab(Λ_Z q) cQ(q) 를 만듭니다."""
    particle, alpha = _check_particle_alpha(particle, alpha)

    def integrand(r: np.ndarray, phi: np.ndarray) -> np.ndarray:
        qx, qy, qz = _source_momentum(particle, r, phi)
        theta_q, phi_q = spherical_angles(qx, qy, qz)
        c_h, c_v = hv_coefficient_arrays(theta_q, phi_q)
        states = np.stack([c_h, c_v], axis=-1)  # (..., 3, 2), 열이 H, V

        kx, ky, kz, _ = boost_components(alpha, qx, qy, qz)
        theta_k, phi_k = spherical_angles(kx, ky, kz)
        projectors = np.stack(projector_arrays(theta_k, phi_k), axis=-3)  # (..., 4, 3, 3)

        return np.einsum('...sp,...mst,...tq->...mpq', np.conj(states), projectors, states)

    return integrand

def overlap_integrand(particle: str) -> Integrand:
    """(r, φ) → shape (..., 2, 2) 상태 내적 cP(q)† cQ(q)"""
    particle = PcatValidator.validate_particle(particle)

    def integrand(r: np.ndarray, phi: np.ndarray) -> np.ndarray:
        qx, qy, qz = _source_momentum(particle, r, phi)
        theta_q, phi_q = spherical_angles(qx, qy, qz)
        states = np.stack(hv_coefficient_arrays(theta_q, phi_q), axis=-1)
        return np.einsum('...sp,...sq->...pq', np.conj(states), states)

    return integrand

def _build(values: np.ndarray, particle: str, alpha: float, width: float, **provenance: Any) -> TransferMatrices:
    return TransferMatrices(values[0], values[1], values[2], values[3],
                            particle=particle, alpha=alpha, width=width, **provenance)

def plane_wave_transfer(particle: str, alpha: float = 0.0) -> TransferMatrices:
    """W = 0 극한: r = 0 한 점에서 평가 (ê_x = x̂, ê_y = ŷ)"""
    particle, alpha = _check_particle_alpha(particle, alpha)
    zero = np.zeros((1, 1))
    values = transfer_integrand(particle, alpha)(zero, zero)[0, 0]
    return _build(values, particle, alpha, 0.0)

def single_photon_transfer(particle: str, alpha: float, width: float,
                           spec: Optional[QuadratureSpec] = None,
                           require_convergence: bool = False) -> TransferMatrices:
    """광자 하나의 전달 행렬을 적분으로 계산합니다.

    Args:
        particle: 'A' (부스트된 검출기) 또는 'B' (정지 검출기, alpha = 0)
        alpha: 검출기 rapidity
        width: 정규화된 폭 W (0 이면 평면파 극한)
        spec: 적분 설정
        require_convergence: True 이면 비수렴 시 ConvergenceError

    Returns:
        TransferMatrices: 전달 행렬과 est_error, 수렴 여부

    Raises:
        ConvergenceError: require_convergence=True 이고 적분이 수렴하지 않은 경우
        ConsistencyError: 측도 상쇄 또는 에르미트성 확인 실패
    """
    particle, alpha = _check_particle_alpha(particle, alpha)
    width = PcatValidator.validate_width(width)

    if width == 0.0:
        return plane_wave_transfer(particle, alpha)

    spec = spec or QuadratureSpec()
    packet = GaussianPacket(width, particle)

    if alpha != 0.0:
        qx, qy, qz = _source_momentum(particle, width, 0.3)
        assert_measure_cancellation(ZBoost(alpha), ThreeMomentum(float(qx), float(qy), float(qz)))

    result = integrate_polar(transfer_integrand(particle, alpha), packet, spec)
    if not result.converged and require_convergence:
        raise ConvergenceError(
            f"전달 행렬 적분 비수렴: particle={particle}, α={alpha}, W={width}, "
            f"est_error={result.est_error:.3e} > {spec.target_tol:.1e}"
        )

    transfer = _build(result.value, particle, alpha, width, spec=spec, est_error=result.est_error,
                      converged=result.converged, nodes_used=result.nodes_used)
    transfer.check_invariants()
    logger.debug(f"전달 행렬 계산: particle={particle}, α={alpha}, W={width}, "
                 f"nodes={result.nodes_used}, est_error={result.est_error:.3e}")
    return transfer

def state_norms(particle: str, width: float,
                spec: Optional[QuadratureSpec] = None) -> Tuple[complex, complex, complex]:
    """(⟨H'|H'⟩, ⟨V'|V'⟩, ⟨H'|V'⟩).

    부스트는 유니터리이므로 내적은 alpha 와 무관하고 광원 좌표계에서 계산합니다.
    """
    width = PcatValidator.validate_width(width)
    if width == 0.0:
        values = overlap_integrand(particle)(np.zeros((1, 1)), np.zeros((1, 1)))[0, 0]
    else:
        values = integrate_polar(overlap_integrand(particle), GaussianPacket(width, particle), spec).value
    return complex(values[0, 0]), complex(values[1, 1]), complex(values[0, 1])

def state_overlap_HV(particle: str, alpha: float, width: float,
                     spec: Optional[QuadratureSpec] = None) -> complex:
    """⟨H'|V'⟩ (방위각 반대칭으로 0 이어야 함)"""
    _check_particle_alpha(particle, alpha)
    return state_norms(particle, width, spec)[2]

def assert_state_normalized(particle: str, width: float, spec: Optional[QuadratureSpec] = None,
                            tol: float = NORM_TOL) -> None:
    """⟨H'|H'⟩ = ⟨V'|V'⟩ = 1, ⟨H'|V'⟩ ≈ 0 확인

    Raises:
        ConsistencyError: 허용 오차를 넘는 경우
    """
    hh, vv, hv = state_norms(particle, width, spec)
    if abs(hh - 1.0) > tol or abs(vv - 1.0) > tol or abs(hv) > tol:
        raise ConsistencyError(
            f"상태 정규화 실패 (particle={particle}, W={width}): "
            f"⟨H|H⟩={hh:.15g}, ⟨V|V⟩={vv:.15g}, |⟨H|V⟩|={abs(hv):.3e}"
        )

@dataclass(frozen=True)
class TransferPair:
    """한 (α, W) 점에서 광자 A, B 의 전달 행렬 쌍"""

    a: TransferMatrices
    b: TransferMatrices

    @property
    def est_error(self) -> float:
        return max(self.a.est_error, self.b.est_error)

    @property
    def converged(self) -> bool:
        return self.a.converged and self.b.converged

def transfer_pair(alpha: float, width: float, spec: Optional[QuadratureSpec] = None,
                  require_convergence: bool = False) -> TransferPair:
    """광자 A, B 의 전달 행렬 쌍. 수렴한 유한 폭 쌍은 상태 정규화를 확인합니다.

    Raises:
        ConsistencyError: ⟨H'|H'⟩, ⟨V'|V'⟩ 가 1 이 아니거나 ⟨H'|V'⟩ ≠ 0 인 경우
    """
    pair = TransferPair(
        single_photon_transfer('A', alpha, width, spec, require_convergence),
        single_photon_transfer('B', 0.0, width, spec, require_convergence),
    )
    if pair.a.width > 0.0 and pair.converged:
        tol = max(NORM_TOL, (spec or QuadratureSpec()).target_tol)
        for particle in ('A', 'B'):
            assert_state_normalized(particle, pair.a.width, spec, tol)
    return pair

def _transfer_pair_job(job: Tuple[float, float, Optional[QuadratureSpec], bool]) -> TransferPair:
    alpha, width, spec, require_convergence = job
    return transfer_pair(alpha, width, spec, require_convergence)

def transfer_pairs_for(points: Sequence[Tuple[float, float]], spec: Optional[QuadratureSpec] = None,
                       jobs: int = 1, require_convergence: bool = False) -> List[TransferPair]:
    """여러 (α, W) 점의 전달 행렬 쌍을 계산합니다. 결과는 입력 순서를 따릅니다."""
    jobs = PcatValidator.validate_positive_int(jobs, "jobs")
    work = [(float(alpha), float(width), spec, require_convergence) for alpha, width in points]

    if jobs == 1 or len(work) <= 1:
        return [_transfer_pair_job(job) for job in work]

    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(_transfer_pair_job, work))
