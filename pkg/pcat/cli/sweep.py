"""
그림 재현과 파라미터 스윕 계산을 묶는 모듈입니다.

각 함수는 CSV 로 저장할 DataFrame, 그래프용 곡선, 매니페스트 추가 항목을
SweepResult 로 돌려줍니다. 여러 (α, W) 점의 전달 행렬은 jobs 개 작업자로
병렬 계산하고 결과는 항상 격자 순서로 모읍니다.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import numpy.typing as npt
import pandas as pd

from ..correlator.chsh import chsh_curve, delta_F_curve, effective_width
from ..correlator.transfer import single_photon_transfer, transfer_pairs_for
from ..numerics.quadrature import QuadratureSpec
from ..oracle.bell_run import simulate_bell_run
from ..oracle.monte_carlo import compare_transfer, mc_transfer
from ..physics.kinematics import ThreeMomentum, ZBoost, doppler_factor
from ..utils import ProgressTracker
from ..validators import PcatValidator
from .exporter import frame_max

logger = logging.getLogger(__name__)

@dataclass
class SweepResult:
    frame: pd.DataFrame
    curves: Dict[str, np.ndarray] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)
    theta: Optional[np.ndarray] = None

    def plot_axis(self) -> np.ndarray:
        return self.frame['theta_rad'].to_numpy() if self.theta is None else self.theta

    @property
    def max_est_error(self) -> Optional[float]:
        return frame_max(self.frame)

def theta_grid(theta_min: float, theta_max: float, steps: int) -> np.ndarray:
    steps = PcatValidator.validate_positive_int(steps, "theta_steps")
    grid = np.linspace(PcatValidator.validate_finite(theta_min, "theta_min"),
                       PcatValidator.validate_finite(theta_max, "theta_max"), steps)
    return PcatValidator.validate_theta_grid(grid)

def stable_to_digits(reference: npt.ArrayLike, candidate: npt.ArrayLike, digits: int = 2) -> np.ndarray:
    """candidate 가 reference 곡선의 선두 자릿수 기준으로 digits 자리까지 같은지"""
    reference = np.asarray(reference, dtype=float)
    candidate = np.asarray(candidate, dtype=float)
    scale = float(np.max(np.abs(reference)))
    if scale == 0.0:
        return np.abs(candidate) == 0.0
    tol = 0.5 * 10.0 ** (math.floor(math.log10(scale)) + 1 - digits)
    return np.abs(candidate - reference) <= tol

def _label(value: float) -> str:
    return f"{value:g}"

def chsh_table(grid: Sequence[float], alpha: float, width: float,
               spec: Optional[QuadratureSpec] = None) -> SweepResult:
    curve = chsh_curve(grid, alpha, width, spec, require_convergence=True)
    return SweepResult(curve.to_frame(), {f"α={_label(alpha)}, W={_label(width)}": curve.F},
                       {'converged': curve.converged})

def fig1_table(grid: Sequence[float], widths: Sequence[float], alpha: float, alpha_saturation: float,
               alpha_negative: float, spec: Optional[QuadratureSpec] = None, jobs: int = 1,
               saturation_tol: float = 1e-6) -> SweepResult:
    """큰 α 극한에서 폭별 F(ϑ). 포화 확인(α_saturation)과 α → -∞ 쪽 열을 함께 기록합니다."""
    widths = PcatValidator.validate_float_list(widths, "widths")
    tracker = ProgressTracker(3 * len(widths), "fig1 곡선 계산", logger)

    main_pairs = transfer_pairs_for([(alpha, w) for w in widths], spec, jobs, require_convergence=True)
    sat_pairs = transfer_pairs_for([(alpha_saturation, w) for w in widths], spec, jobs, require_convergence=True)
    # α → -∞ 쪽은 축 근처의 급격한 전이 때문에 수렴을 강제하지 않음
    neg_pairs = transfer_pairs_for([(alpha_negative, w) for w in widths], spec, jobs)

    frame = pd.DataFrame({'theta_rad': np.asarray(grid, dtype=float)})
    curves: Dict[str, np.ndarray] = {}
    saturation = 0.0
    converged = True
    for w, main, sat, neg in zip(widths, main_pairs, sat_pairs, neg_pairs):
        key = _label(w)
        curve = chsh_curve(grid, alpha, w, spec, pair=main)
        tracker.update(f"W={key}, α={_label(alpha)}")
        sat_curve = chsh_curve(grid, alpha_saturation, w, spec, pair=sat)
        tracker.update(f"W={key}, α={_label(alpha_saturation)}")
        neg_curve = chsh_curve(grid, alpha_negative, w, spec, pair=neg)
        tracker.update(f"W={key}, α={_label(alpha_negative)}")

        frame[f"F_W{key}"] = curve.F
        frame[f"F_W{key}_sat"] = sat_curve.F
        frame[f"F_W{key}_neg"] = neg_curve.F
        frame[f"est_error_W{key}"] = curve.est_error
        curves[f"W={key}"] = curve.F

        saturation = max(saturation, float(np.max(np.abs(curve.F - sat_curve.F))))
        converged = converged and neg_curve.converged

    tracker.complete()
    if saturation > saturation_tol:
        logger.warning(f"α={alpha} 곡선이 포화되지 않았습니다: max|F(α={alpha}) - F(α={alpha_saturation})| = {saturation:.3e}")

    return SweepResult(frame, curves, {
        'saturation_max_diff': saturation,
        'saturated': saturation <= saturation_tol,
        'negative_limit_converged': converged,
    })

def fig2_table(grid: Sequence[float], width: float, alphas: Sequence[float],
               spec: Optional[QuadratureSpec] = None, jobs: int = 1) -> SweepResult:
    """고정 폭에서 검출기 속도(α)별 F(ϑ)"""
    alphas = PcatValidator.validate_float_list(alphas, "alphas")
    pairs = transfer_pairs_for([(a, width) for a in alphas], spec, jobs)

    frame = pd.DataFrame({'theta_rad': np.asarray(grid, dtype=float)})
    curves: Dict[str, np.ndarray] = {}
    unconverged: List[str] = []
    for alpha, pair in zip(alphas, pairs):
        key = _label(alpha)
        curve = chsh_curve(grid, alpha, width, spec, pair=pair)
        frame[f"F_alpha{key}"] = curve.F
        frame[f"est_error_alpha{key}"] = curve.est_error
        curves[f"α={key}"] = curve.F
        if not curve.converged:
            unconverged.append(key)

    return SweepResult(frame, curves, {'unconverged_alphas': unconverged or 'none'})

def fig3_table(grid: Sequence[float], alpha: float, width: float, spec: Optional[QuadratureSpec] = None,
               guard_fraction: float = 0.1, stability: bool = False) -> SweepResult:
    """ΔF(ϑ) = F(ϑ; α, W) - F(ϑ; 0, W). stability=True 이면 노드를 배가해 다시 계산합니다."""
    spec = spec or QuadratureSpec()
    curve = delta_F_curve(grid, alpha, width, spec, guard_fraction)
    frame = curve.to_frame()
    extra: Dict[str, Any] = {'max_abs_delta_F': float(np.max(np.abs(curve.delta)))}

    if stability:
        doubled = delta_F_curve(grid, alpha, width, spec.doubled(), guard_fraction)
        stable = stable_to_digits(curve.delta, doubled.delta)
        frame['delta_F_doubled'] = doubled.delta
        frame['stable'] = stable
        extra['stable_2_digits'] = bool(np.all(stable))
        if not np.all(stable):
            logger.warning("ΔF 가 노드 배가에 대해 유효숫자 2자리까지 안정하지 않습니다")

    return SweepResult(frame, {'ΔF': curve.delta}, extra)

def sweep_table(widths: Sequence[float], alphas: Sequence[float], thetas: Sequence[float],
                spec: Optional[QuadratureSpec] = None, jobs: int = 1) -> SweepResult:
    """(W, α) 격자 위의 F(ϑ). 행 순서는 W, α, ϑ 순입니다."""
    widths = PcatValidator.validate_float_list(widths, "widths")
    alphas = PcatValidator.validate_float_list(alphas, "alphas")
    grid = PcatValidator.validate_theta_grid(thetas)

    points = [(a, w) for w in widths for a in alphas]
    tracker = ProgressTracker(len(points), "파라미터 스윕", logger)
    pairs = transfer_pairs_for(points, spec, jobs)

    rows = []
    for (alpha, width), pair in zip(points, pairs):
        curve = chsh_curve(grid, alpha, width, spec, pair=pair)
        for point in curve.points:
            rows.append({
                'width': width,
                'alpha': alpha,
                'theta_rad': point.theta,
                'F': point.F,
                'est_error': point.est_error,
                'converged': curve.converged,
            })
        tracker.update(f"α={_label(alpha)}, W={_label(width)}")
    tracker.complete()

    return SweepResult(pd.DataFrame(rows))

def compare_table(alpha: float, width: float, theta: float, grid: Sequence[float],
                  spec: Optional[QuadratureSpec] = None) -> SweepResult:
    """유효 폭 비교: F(ϑ; W, α) 와 같은 값을 주는 정지 검출기의 W_eff"""
    result = effective_width(alpha, width, theta, spec)
    boosted = chsh_curve(grid, alpha, width, spec)
    matched = chsh_curve(grid, 0.0, result.width_eff, spec)
    mismatch = float(np.max(np.abs(boosted.F - matched.F)))

    frame = pd.DataFrame([{
        'alpha': alpha,
        'width': width,
        'theta_rad': theta,
        'F': result.target_F,
        'width_eff': result.width_eff,
        'iterations': result.iterations,
        'doppler_on_axis': doppler_factor(ZBoost(alpha), ThreeMomentum(0.0, 0.0, 1.0)),
        'sup_curve_mismatch': mismatch,
    }])
    curves = {f"α={_label(alpha)}, W={_label(width)}": boosted.F,
              f"α=0, W_eff={result.width_eff:.4g}": matched.F}
    return SweepResult(frame, curves, {'width_eff': result.width_eff}, theta=np.asarray(grid, dtype=float))

def oracle_table(alpha: float, width: float, samples: int, seed: int, shard_size: int,
                 spec: Optional[QuadratureSpec] = None, z_threshold: float = 3.0) -> SweepResult:
    """구적법과 Monte Carlo 의 전달 행렬 원소별 비교 (광자 A, B)"""
    frames = []
    for particle, particle_alpha in (('A', alpha), ('B', 0.0)):
        quad = single_photon_transfer(particle, particle_alpha, width, spec)
        mc = mc_transfer(particle, particle_alpha, width, samples, seed, shard_size)
        table = compare_transfer(quad, mc, z_threshold)
        table.insert(0, 'particle', particle)
        frames.append(table)

    frame = pd.concat(frames, ignore_index=True)
    disagreements = int((~frame['agrees']).sum())
    if disagreements:
        logger.warning(f"{disagreements}개 원소가 {z_threshold}σ 안에서 일치하지 않습니다")
    return SweepResult(frame, extra={'max_z': float(frame['z'].max()), 'disagreements': disagreements})

def bell_table(theta: float, pairs: int, seed: int) -> SweepResult:
    """이상 극한 Bell 실험의 유한 N 시뮬레이션"""
    run = simulate_bell_run(theta, pairs, seed)
    low, high = run.confidence(0.95)
    return SweepResult(run.to_frame(), extra={
        'chsh_sum': run.chsh_sum,
        'chsh_exact': run.expected_sum,
        'chsh_ci95': (low, high),
    })

__all__ = [
    'SweepResult', 'theta_grid', 'stable_to_digits', 'chsh_table', 'fig1_table', 'fig2_table',
    'fig3_table', 'sweep_table', 'compare_table', 'oracle_table', 'bell_table',
]
