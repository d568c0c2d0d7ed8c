"""
전달 행렬 적분의 독립적인 Monte Carlo 추정 모듈입니다.

반지름은 역 누적분포 r = W·√(-ln u) 로 정확히 가우시안 분포를 따르게 뽑고
φ 는 [0, 2π) 에서 균일하게 뽑습니다. 피적분함수는 구적법 경로와 다르게
헬리시티 삼중항 벡터로 편광 벡터 v_P(k) = Σ_s cP_s(q) ε^s_k 를 만든 뒤
conj(â·v_P)·(b̂·v_Q) 로 조립하므로 편광 기본 연산 외에는 공유하는 코드가 없습니다.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, Optional, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd

from ..correlator.transfer import PROJECTOR_NAMES, STATE_LABELS, TransferMatrices
from ..exceptions import PcatConfigurationError, PcatDomainError
from ..physics.kinematics import boost_components, spherical_angles
from ..physics.polarization import SQRT_HALF, hv_coefficient_arrays, rotation_arrays
from ..physics.wavepacket import GaussianPacket
from ..validators import PcatValidator

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000
DEFAULT_SHARD_SIZE = 500_000
Z_THRESHOLD = 3.0
ABS_SLACK = 1e-12

SampleFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

@dataclass(frozen=True)
class McEstimate:
    """표본 평균과 표준 오차

    복소 값의 표준 오차는 √(Var Re + Var Im)/√n 입니다.
    배열 값 피적분함수이면 mean, std_error 모두 같은 shape 의 배열입니다.
    """

    mean: Any
    std_error: Any
    n_samples: int

    def agrees_with(self, value: npt.ArrayLike, z_threshold: float = Z_THRESHOLD) -> bool:
        return bool(np.all(np.abs(np.asarray(value) - self.mean) <= z_threshold * self.std_error + ABS_SLACK))

@dataclass
class _RunningMoments:
    """Chan 의 병렬 평균/분산 병합"""

    n: int = 0
    mean: Any = 0.0
    m2: Any = 0.0

    def merge(self, values: np.ndarray) -> None:
        count = values.shape[0]
        shard_mean = values.mean(axis=0)
        shard_m2 = np.sum(np.abs(values - shard_mean) ** 2, axis=0)

        if self.n == 0:
            self.n, self.mean, self.m2 = count, shard_mean, shard_m2
            return

        total = self.n + count
        delta = shard_mean - self.mean
        self.mean = self.mean + delta * (count / total)
        self.m2 = self.m2 + shard_m2 + np.abs(delta) ** 2 * (self.n * count / total)
        self.n = total

    def estimate(self) -> McEstimate:
        variance = self.m2 / (self.n - 1) if self.n > 1 else np.zeros_like(self.m2)
        return McEstimate(self.mean, np.sqrt(variance / self.n), self.n)

def _shard_sizes(n_samples: int, shard_size: int) -> Iterator[int]:
    full, rest = divmod(n_samples, shard_size)
    for _ in range(full):
        yield shard_size
    if rest:
        yield rest

def mc_integrate(f: SampleFunction, packet: GaussianPacket, n_samples: int,
                 seed: int = 7, shard_size: int = DEFAULT_SHARD_SIZE) -> McEstimate:
    """∫ d²q ρ_W(q_r) f(q_r, φ) 의 Monte Carlo 추정

    샤드마다 SeedSequence(seed).spawn 으로 나눈 시드의 PCG64 생성기를 쓰므로
    (seed, shard_size) 가 같으면 결과는 비트 단위로 같습니다.

    Args:
        f: (r, φ) 1차원 배열 → shape (n, ...) 값
        packet: 표본 분포
        n_samples: 총 표본 수
        seed: 기본 시드
        shard_size: 샤드당 표본 수
    """
    n_samples = PcatValidator.validate_positive_int(n_samples, "n_samples", minimum=2)
    shard_size = PcatValidator.validate_positive_int(shard_size, "shard_size")
    sizes = list(_shard_sizes(n_samples, shard_size))
    children = np.random.SeedSequence(int(seed)).spawn(len(sizes))

    moments = _RunningMoments()
    for size, child in zip(sizes, children):
        rng = np.random.Generator(np.random.PCG64(child))
        u = 1.0 - rng.random(size)  # (0, 1]
        phi = 2.0 * np.pi * rng.random(size)
        values = np.asarray(f(packet.sample_radius(u), phi))
        if values.ndim == 0 or values.shape[0] != size:
            values = np.broadcast_to(values, (size,) + values.shape)
        moments.merge(values)

    estimate = moments.estimate()
    logger.debug(f"MC 적분: n={n_samples}, shards={len(sizes)}, seed={seed}")
    return estimate

# ---------------------------------------------------------------------------
# 전달 행렬 피적분함수 (헬리시티 삼중항 경로)
# ---------------------------------------------------------------------------

def _helicity_vectors(theta: npt.ArrayLike, phi: npt.ArrayLike) -> np.ndarray:
    """(..., 3 (+, -, l), 3 (x, y, z)) 복소 헬리시티 벡터"""
    rot = rotation_arrays(theta, phi)
    e1, e2, e3 = rot[..., :, 0], rot[..., :, 1], rot[..., :, 2]
    plus = SQRT_HALF * (e1 + 1j * e2)
    minus = SQRT_HALF * (e1 - 1j * e2)
    return np.stack([plus, minus, e3.astype(complex)], axis=-2)

def _transfer_samples(particle: str, alpha: float) -> SampleFunction:
    sign = 1.0 if particle == 'A' else -1.0

    def samples(r: np.ndarray, phi: np.ndarray) -> np.ndarray:
        qx, qy = r * np.cos(phi), r * np.sin(phi)
        qz = np.full_like(r, sign)
        c_h, c_v = hv_coefficient_arrays(*spherical_angles(qx, qy, qz))

        kx, ky, kz, _ = boost_components(alpha, qx, qy, qz)
        eps = _helicity_vectors(*spherical_angles(kx, ky, kz))
        v_h = np.einsum('ns,nsc->nc', c_h, eps)
        v_v = np.einsum('ns,nsc->nc', c_v, eps)

        # (n, P, a): â·v_P, â ∈ {x̂, ŷ}
        dots = np.stack([v_h[:, :2], v_v[:, :2]], axis=1)
        out = np.empty((r.shape[0], 4, 2, 2), dtype=complex)
        for m, (a, b) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
            out[:, m] = np.conj(dots[:, :, a])[:, :, None] * dots[:, None, :, b]
        return out

    return samples

@dataclass(frozen=True)
class McTransfer:
    """Monte Carlo 로 추정한 광자 하나의 전달 행렬"""

    particle: str
    alpha: float
    width: float
    seed: int
    estimate: McEstimate

    @property
    def n_samples(self) -> int:
        return self.estimate.n_samples

    def entries(self) -> Iterator[Tuple[str, McEstimate]]:
        """TransferMatrices.entries() 와 같은 순서로 원소별 추정값을 순회합니다."""
        mean, error = self.estimate.mean, self.estimate.std_error
        for m, name in enumerate(PROJECTOR_NAMES):
            for i, p in enumerate(STATE_LABELS):
                for j, q in enumerate(STATE_LABELS):
                    yield (f"G_{name}[{p},{q}]",
                           McEstimate(complex(mean[m, i, j]), float(error[m, i, j]), self.n_samples))

    def as_dict(self) -> Dict[str, McEstimate]:
        return dict(self.entries())

def mc_transfer(particle: str, alpha: float, width: float, n_samples: int = 10_000_000,
                seed: int = 7, shard_size: int = DEFAULT_SHARD_SIZE) -> McTransfer:
    """G_ab[P, Q] 16개 복소 원소의 Monte Carlo 추정

    Raises:
        PcatConfigurationError: n_samples < 10⁴ 또는 광자 B 에 alpha ≠ 0
        PcatDomainError: width ≤ 0
    """
    particle = PcatValidator.validate_particle(particle)
    alpha = PcatValidator.validate_finite(alpha, "alpha")
    n_samples = PcatValidator.validate_positive_int(n_samples, "n_samples", minimum=MIN_SAMPLES)
    if particle == 'B' and alpha != 0.0:
        raise PcatConfigurationError("광자 B 의 검출기는 정지해 있어야 합니다 (alpha = 0)")
    width = PcatValidator.validate_width(width, allow_zero=False)

    estimate = mc_integrate(_transfer_samples(particle, alpha), GaussianPacket(width, particle),
                            n_samples, seed, shard_size)
    logger.info(f"MC 전달 행렬: particle={particle}, α={alpha}, W={width}, n={n_samples}, seed={seed}")
    return McTransfer(particle, alpha, width, int(seed), estimate)

def compare_transfer(quadrature: TransferMatrices, mc: McTransfer,
                     z_threshold: float = Z_THRESHOLD) -> pd.DataFrame:
    """구적법과 Monte Carlo 결과의 원소별 비교표

    Returns:
        pd.DataFrame: entry, quad_re, quad_im, mc_re, mc_im, std_error, delta, z, agrees
    """
    if (quadrature.particle, quadrature.alpha, quadrature.width) != (mc.particle, mc.alpha, mc.width):
        raise PcatConfigurationError(
            f"비교 대상의 파라미터가 다릅니다: quad=({quadrature.particle}, {quadrature.alpha}, {quadrature.width}), "
            f"mc=({mc.particle}, {mc.alpha}, {mc.width})"
        )

    mc_entries = mc.as_dict()
    rows = []
    for name, quad_value in quadrature.entries():
        est = mc_entries[name]
        delta = abs(quad_value - est.mean)
        z = delta / est.std_error if est.std_error > 0 else (0.0 if delta <= ABS_SLACK else math.inf)
        rows.append({
            'entry': name,
            'quad_re': quad_value.real,
            'quad_im': quad_value.imag,
            'mc_re': est.mean.real,
            'mc_im': est.mean.imag,
            'std_error': est.std_error,
            'delta': delta,
            'z': z,
            'agrees': delta <= z_threshold * est.std_error + ABS_SLACK,
        })
    return pd.DataFrame(rows)

def sample_moments(width: float, n_samples: int, seed: int = 7,
                   shard_size: Optional[int] = None) -> Tuple[McEstimate, McEstimate]:
    """표본기 점검용: (∫ρ_W, ∫ρ_W r²) 추정. 기댓값은 (1, W²)."""
    width = PcatValidator.validate_width(width, allow_zero=False)
    if n_samples < 2:
        raise PcatDomainError(f"표본 수는 2 이상이어야 합니다: {n_samples}")
    packet = GaussianPacket(width)
    shard_size = shard_size or DEFAULT_SHARD_SIZE
    ones = mc_integrate(lambda r, phi: np.ones_like(r), packet, n_samples, seed, shard_size)
    second = mc_integrate(lambda r, phi: r * r, packet, n_samples, seed, shard_size)
    return ones, second
