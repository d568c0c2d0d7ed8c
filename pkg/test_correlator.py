#!/usr/bin/env python3
"""
전달 행렬, 상관 함수, CHSH 함수 테스트
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from pcat.correlator.chsh import (
    TSIRELSON,
    chsh_curve,
    chsh_F,
    correlation,
    delta_F_curve,
    effective_width,
    ideal_F,
    sigma_matrix,
)
from pcat.correlator.transfer import (
    assert_state_normalized,
    plane_wave_transfer,
    single_photon_transfer,
    state_norms,
    state_overlap_HV,
    transfer_pair,
    transfer_pairs_for,
)
from pcat.exceptions import CancellationError, ConsistencyError, ConvergenceError, PcatConfigurationError
from pcat.numerics.quadrature import QuadratureSpec

THETA_GRID = np.linspace(0.0, math.pi / 2, 181)

# ---------------------------------------------------------------------------
# 전달 행렬
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("particle, alpha", [('A', 0.0), ('A', 3.0), ('A', -2.0), ('B', 0.0)])
def test_plane_wave_limit(particle, alpha):
    t = single_photon_transfer(particle, alpha, 0.0)
    np.testing.assert_allclose(t.g_xx, [[1, 0], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(t.g_yy, [[0, 0], [0, 1]], atol=1e-15)
    np.testing.assert_allclose(t.g_xy, [[0, 1], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(t.g_yx, [[0, 0], [1, 0]], atol=1e-15)
    assert t.est_error == 0.0

def test_rest_detector_required_for_b():
    with pytest.raises(PcatConfigurationError):
        single_photon_transfer('B', 1.0, 0.6)
    with pytest.raises(PcatConfigurationError):
        plane_wave_transfer('B', -0.5)

def test_cross_entry_vanishes_by_parity():
    t = single_photon_transfer('B', 0.0, 0.6)
    assert abs(t.g_xx[0, 1]) < 1e-12
    assert t.converged

@pytest.mark.parametrize("particle, alpha", [('A', -2.0), ('A', 3.0), ('B', 0.0)])
def test_transfer_invariants(particle, alpha):
    width = 0.1 if alpha == 3.0 else 0.6
    t = single_photon_transfer(particle, alpha, width)
    np.testing.assert_allclose(t.g_xy.conj().T, t.g_yx, atol=1e-12)
    for g in (t.g_xx, t.g_yy):
        np.testing.assert_allclose(g, g.conj().T, atol=1e-12)
        eigenvalues = np.linalg.eigvalsh(g)
        assert eigenvalues.min() > -1e-12 and eigenvalues.max() < 1 + 1e-12
    assert len(dict(t.entries())) == 16

def test_convergence_can_be_required():
    spec = QuadratureSpec(n_radial=2, n_azimuthal=2, target_tol=1e-15, max_doublings=1)
    with pytest.raises(ConvergenceError):
        single_photon_transfer('A', 0.0, 0.6, spec, require_convergence=True)

def test_state_normalization():
    hh, vv, hv = state_norms('A', 0.6)
    assert abs(hh - 1.0) < 1e-12
    assert abs(vv - 1.0) < 1e-12
    assert abs(hv) < 1e-12
    assert abs(state_overlap_HV('A', -2.0, 0.6)) < 1e-12
    assert state_overlap_HV('B', 0.0, 0.0) == 0
    assert_state_normalized('B', 1.5)

def test_pair_checks_state_normalization(monkeypatch):
    import pcat.correlator.transfer as transfer_module
    monkeypatch.setattr(transfer_module, 'state_norms', lambda particle, width, spec=None: (1.0 + 1e-9, 1.0, 0.0))
    with pytest.raises(ConsistencyError):
        transfer_pair(0.0, 0.3)
    assert transfer_pair(-1.0, 0.0).converged

def test_parallel_pairs_keep_order():
    points = [(0.0, 0.3), (1.0, 0.3), (-1.0, 0.3)]
    serial = transfer_pairs_for(points)
    parallel = transfer_pairs_for(points, jobs=2)
    for s, p in zip(serial, parallel):
        assert s.a.alpha == p.a.alpha
        np.testing.assert_array_equal(s.a.as_array(), p.a.as_array())

# ---------------------------------------------------------------------------
# 상관 함수
# ---------------------------------------------------------------------------

def test_sigma_matrix_known_values():
    t = plane_wave_transfer('A')
    np.testing.assert_allclose(sigma_matrix(t, 0.0).matrix, t.g_xx - t.g_yy, atol=1e-15)
    np.testing.assert_allclose(sigma_matrix(t, math.pi / 2).matrix, -(t.g_xx - t.g_yy), atol=1e-15)
    np.testing.assert_allclose(sigma_matrix(t, math.pi / 4).matrix, [[0, 1], [1, 0]], atol=1e-15)

@pytest.mark.parametrize("phi, varpi", [(0.0, 0.0), (math.pi / 4, 0.0), (0.3, -0.2), (1.0, 0.4)])
def test_plane_wave_correlation(phi, varpi):
    a, b = plane_wave_transfer('A'), plane_wave_transfer('B')
    value = correlation(sigma_matrix(a, phi), sigma_matrix(b, varpi))
    assert value == pytest.approx(math.cos(2 * (phi - varpi)), abs=1e-12)

def test_finite_width_reduces_correlation():
    pair = transfer_pair(0.0, 0.6)
    value = correlation(sigma_matrix(pair.a, 0.0), sigma_matrix(pair.b, 0.0))
    assert 0.0 < value < 1.0

# ---------------------------------------------------------------------------
# CHSH 함수
# ---------------------------------------------------------------------------

def test_chsh_known_values():
    assert chsh_F(math.pi / 6, 0.0, 0.0).F == pytest.approx(2.5, abs=1e-12)
    assert chsh_F(0.0, 0.0, 0.0).F == pytest.approx(2.0, abs=1e-12)
    single = chsh_curve([0.0], 0.0, 0.0)
    assert single.F.tolist() == pytest.approx([2.0])

def test_ideal_maximum():
    curve = chsh_curve(THETA_GRID, 0.0, 0.0)
    index = int(np.argmax(curve.F))
    assert THETA_GRID[index] == pytest.approx(math.pi / 6)
    assert abs(curve.F[index] - 2.5) < 1e-9

def test_ideal_closed_form():
    curve = chsh_curve(THETA_GRID, 0.0, 0.0)
    np.testing.assert_allclose(curve.F, ideal_F(THETA_GRID), atol=1e-10)

@pytest.mark.parametrize("alpha", [-3.0, -1.0, 1.0, 3.0])
def test_boost_immunity_at_zero_width(alpha):
    rest = chsh_curve(THETA_GRID, 0.0, 0.0)
    boosted = chsh_curve(THETA_GRID, alpha, 0.0)
    assert np.max(np.abs(boosted.F - rest.F)) < 1e-9

def test_large_rapidity_width_ordering():
    theta = math.pi / 6
    values = [chsh_F(theta, 15.0, w).F for w in (0.0, 0.3, 0.6, 1.0)]
    saturated = [chsh_F(theta, 20.0, w).F for w in (0.0, 0.3, 0.6, 1.0)]
    np.testing.assert_allclose(values, saturated, atol=1e-6)
    gaps = -np.diff(values)
    assert np.all(gaps > 1e-3)

@pytest.mark.parametrize("alpha", [0.0, -1.0])
def test_width_ordering_at_fixed_rapidity(alpha):
    theta = math.pi / 6
    values = [chsh_F(theta, alpha, w).F for w in (0.0, 0.3, 0.6, 1.0)]
    assert np.all(np.diff(values) < 0)

@pytest.mark.parametrize("alpha", [0.0, -1.0])
def test_common_analyzer_rotation_at_zero_width(alpha):
    pair = transfer_pair(alpha, 0.0)

    def E(phi, varpi):
        return correlation(sigma_matrix(pair.a, phi), sigma_matrix(pair.b, varpi))

    for delta in (0.0, 0.3, math.pi / 4, 1.2):
        assert E(delta, delta) == pytest.approx(1.0, abs=1e-9)
        assert E(0.2 + delta, -0.5 + delta) == pytest.approx(E(0.2, -0.5), abs=1e-9)

def test_common_analyzer_rotation_breaks_at_finite_width():
    # ê_x, ê_y 가 직교하지 않으므로 O(W²) 만큼 달라집니다
    width = 0.6
    pair = transfer_pair(0.0, width)
    aligned = correlation(sigma_matrix(pair.a, 0.0), sigma_matrix(pair.b, 0.0))
    rotated = correlation(sigma_matrix(pair.a, math.pi / 4), sigma_matrix(pair.b, math.pi / 4))
    assert 1e-3 < abs(rotated - aligned) < width ** 2

def test_rapidity_ordering_at_fixed_width():
    theta = math.pi / 6
    values = [chsh_F(theta, alpha, 0.6).F for alpha in (2.0, 1.0, 0.0, -1.0, -2.0, -4.0)]
    assert np.all(np.diff(values) <= 1e-12)
    assert values[0] - values[-1] > 1e-2

def test_tsirelson_bound_sample():
    rng = np.random.Generator(np.random.PCG64(11))
    for _ in range(10):
        theta, alpha, width = rng.uniform(0, math.pi / 2), rng.uniform(-4, 4), rng.uniform(0, 1.5)
        assert chsh_F(theta, alpha, width).F <= TSIRELSON + 1e-9

@pytest.mark.slow
def test_tsirelson_bound():
    rng = np.random.Generator(np.random.PCG64(2024))
    for _ in range(100):
        theta, alpha, width = rng.uniform(0, math.pi / 2), rng.uniform(-4, 4), rng.uniform(0, 1.5)
        assert chsh_F(theta, alpha, width).F <= TSIRELSON + 1e-9

def test_curve_frame_columns():
    frame = chsh_curve(np.linspace(0, 1, 5), 0.0, 0.3).to_frame()
    assert list(frame.columns) == ['theta_rad', 'F', 'E_00', 'E_0m', 'E_p0', 'E_pm', 'est_error']
    assert len(frame) == 5

# ---------------------------------------------------------------------------
# ΔF
# ---------------------------------------------------------------------------

def test_delta_f_vanishes_without_boost():
    curve = delta_F_curve(np.linspace(0, math.pi / 2, 7), 0.0, 0.6)
    assert np.all(curve.delta == 0.0)

def test_delta_f_vanishes_at_zero_width():
    curve = delta_F_curve(np.linspace(0, math.pi / 2, 7), 2.0, 0.0)
    assert np.max(np.abs(curve.delta)) < 1e-12

def test_cancellation_guard():
    with pytest.raises(CancellationError):
        delta_F_curve(np.linspace(0, math.pi / 2, 7), 0.5, 0.6, guard_fraction=1e-20)

def test_realistic_delta_f_magnitude():
    grid = np.linspace(0, math.pi / 2, 19)
    curve = delta_F_curve(grid, 2.6e-5, 1e-3)
    assert 1e-12 < np.max(np.abs(curve.delta)) < 1e-9
    frame = curve.to_frame()
    assert list(frame.columns) == ['theta_rad', 'delta_F', 'F', 'F0', 'est_error_F', 'est_error_F0']

@pytest.mark.slow
def test_realistic_delta_f_is_stable_under_doubling():
    from pcat.cli.sweep import stable_to_digits

    grid = np.linspace(0, math.pi / 2, 19)
    spec = QuadratureSpec()
    base = delta_F_curve(grid, 2.6e-5, 1e-3, spec)
    doubled = delta_F_curve(grid, 2.6e-5, 1e-3, spec.doubled())
    assert np.all(stable_to_digits(base.delta, doubled.delta))

# ---------------------------------------------------------------------------
# 유효 폭
# ---------------------------------------------------------------------------

def test_effective_width_at_rest_is_identity():
    result = effective_width(0.0, 0.6)
    assert result.width_eff == pytest.approx(0.6, abs=1e-9)

def test_effective_width_follows_doppler_shift():
    assert effective_width(1.0, 0.3).width_eff < 0.3
    assert effective_width(-1.0, 0.3).width_eff > 0.3
    assert effective_width(2.0, 0.0).width_eff == 0.0

if __name__ == "__main__":
    pytest.main([__file__, "-v"])
